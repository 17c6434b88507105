use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use super::BotKind;
use crate::model::{BotDescriptor, NodeId};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryFile {
    #[serde(default)]
    bot: Vec<BotEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BotEntry {
    name: String,
    #[serde(default = "default_version")]
    version: String,
    #[serde(default)]
    depends_on: Vec<String>,
}

fn default_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// The registered bots and their dependency DAG.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Registry {
    bots: BTreeMap<String, BotDescriptor>,
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All six bots with their standard dependencies.
    pub fn standard() -> Self {
        let entries = BotKind::ALL
            .iter()
            .map(|k| BotEntry {
                name: k.name().into(),
                version: default_version(),
                depends_on: k.dependencies().iter().map(|d| d.name().to_string()).collect(),
            })
            .collect();
        Self::from_entries(entries).expect("standard registry is acyclic")
    }

    /// Read `[[bot]]` tables with `name`, optional `version` and `depends_on`.
    /// Unknown dependencies, duplicates and cycles are refused.
    pub fn from_toml(text: &str) -> Result<Self, String> {
        let file: RegistryFile = toml::from_str(text).map_err(|e| e.to_string())?;
        Self::from_entries(file.bot)
    }

    fn from_entries(entries: Vec<BotEntry>) -> Result<Self, String> {
        let mut by_name: BTreeMap<String, BotEntry> = BTreeMap::new();
        for e in entries {
            if by_name.contains_key(&e.name) {
                return Err(format!("bot {} registered twice", e.name));
            }
            by_name.insert(e.name.clone(), e);
        }
        for e in by_name.values() {
            if let Some(d) = e.depends_on.iter().find(|d| !by_name.contains_key(*d)) {
                return Err(format!("bot {} depends on unregistered bot {d}", e.name));
            }
        }
        // Kahn's algorithm; leftovers sit on a cycle.
        let mut done: BTreeSet<&str> = BTreeSet::new();
        let mut order = Vec::new();
        loop {
            let ready: Vec<&str> = by_name
                .values()
                .filter(|e| !done.contains(e.name.as_str()) && e.depends_on.iter().all(|d| done.contains(d.as_str())))
                .map(|e| e.name.as_str())
                .collect();
            if ready.is_empty() {
                break;
            }
            done.extend(ready.iter().copied());
            order.extend(ready);
        }
        if order.len() != by_name.len() {
            let stuck: Vec<&str> = by_name.keys().map(String::as_str).filter(|n| !done.contains(n)).collect();
            return Err(format!("dependency cycle among bots: {}", stuck.join(", ")));
        }
        let mut bots: BTreeMap<String, BotDescriptor> = BTreeMap::new();
        for name in order {
            let e = &by_name[name];
            let deps: Vec<NodeId> = e.depends_on.iter().map(|d| bots[d].id().clone()).collect();
            bots.insert(name.to_string(), BotDescriptor::new(e.name.clone(), e.version.clone(), deps));
        }
        Ok(Registry { bots })
    }

    pub fn get(&self, name: &str) -> Option<&BotDescriptor> {
        self.bots.get(name)
    }

    /// Descriptors sorted by name.
    pub fn descriptors(&self) -> impl Iterator<Item = &BotDescriptor> {
        self.bots.values()
    }

    pub fn len(&self) -> usize {
        self.bots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bots.is_empty()
    }

    /// `name` and everything it depends on, transitively.
    pub fn closure(&self, name: &str) -> Vec<&BotDescriptor> {
        let by_id: BTreeMap<&NodeId, &BotDescriptor> = self.bots.values().map(|b| (b.id(), b)).collect();
        let mut out: BTreeMap<&NodeId, &BotDescriptor> = BTreeMap::new();
        let mut stack: Vec<&BotDescriptor> = self.get(name).into_iter().collect();
        while let Some(b) = stack.pop() {
            if out.insert(b.id(), b).is_none() {
                stack.extend(b.depends_on().iter().filter_map(|d| by_id.get(d).copied()));
            }
        }
        out.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_registry() {
        let r = Registry::standard();
        assert_eq!(r.len(), 6);
        let soc = r.get("DecBot_SocMedia").unwrap();
        assert!(soc.depends_on().contains(r.get("DecBot_Article").unwrap().id()));
        assert_eq!(r.closure("DecBot_SocMedia").len(), 6);
        assert_eq!(r.closure("LookupBot_WebSite").len(), 1);
    }

    #[test]
    fn empty_and_cyclic() {
        assert!(Registry::from_toml("").unwrap().is_empty());
        let cyclic = r#"
            [[bot]]
            name = "a"
            depends_on = ["b"]
            [[bot]]
            name = "b"
            depends_on = ["a"]
        "#;
        let err = Registry::from_toml(cyclic).unwrap_err();
        assert!(err.contains("cycle"), "{err}");
        assert!(Registry::from_toml("[[bot]]\nname = \"a\"\ndepends_on = [\"zzz\"]\n").is_err());
    }
}
