use std::collections::HashMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::Deserialize;

use super::NormalizeError;
use crate::model::Rating;

const BUILTIN_RULES: &str = include_str!("../../data/claim_rules.toml");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    version: u32,
    #[serde(default)]
    class: Vec<ClassEntry>,
    #[serde(default)]
    pattern: Vec<PatternEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassEntry {
    value: f64,
    confidence: f64,
    labels: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternEntry {
    regex: String,
    value: f64,
    confidence: f64,
}

/// Exact-label table plus ordered whole-label patterns.
#[derive(Debug, Clone)]
pub struct RuleTable {
    version: u32,
    exact: HashMap<String, Rating>,
    patterns: Vec<(Regex, Rating)>,
}

/// The shipped table, loaded once.
pub fn default_rules() -> &'static RuleTable {
    static RULES: OnceLock<RuleTable> = OnceLock::new();
    RULES.get_or_init(|| RuleTable::from_toml(BUILTIN_RULES).expect("shipped rule table is valid"))
}

fn normalize_label(label: &str) -> String {
    let collapsed = label.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    collapsed
        .trim_matches(|c: char| c == '"' || c == '\'' || c == '“' || c == '”' || c.is_whitespace())
        .trim_end_matches(['.', '!'])
        .trim()
        .to_string()
}

impl RuleTable {
    pub fn from_toml(text: &str) -> Result<Self, NormalizeError> {
        let file: RuleFile = toml::from_str(text).map_err(|e| NormalizeError::RuleTable(e.to_string()))?;
        let rating = |v: f64, c: f64, what: &str| {
            Rating::new(v, c).map_err(|e| NormalizeError::RuleTable(format!("{what}: {e}")))
        };
        let mut exact = HashMap::new();
        for class in &file.class {
            let r = rating(class.value, class.confidence, "class")?;
            for label in &class.labels {
                let key = normalize_label(label);
                if let Some(prev) = exact.insert(key.clone(), r) {
                    if prev != r {
                        return Err(NormalizeError::RuleTable(format!("label {key:?} listed with two ratings")));
                    }
                }
            }
        }
        let patterns = file
            .pattern
            .iter()
            .map(|p| {
                let re = Regex::new(&format!("^(?:{})$", p.regex))
                    .map_err(|e| NormalizeError::RuleTable(format!("pattern {:?}: {e}", p.regex)))?;
                Ok((re, rating(p.value, p.confidence, &p.regex)?))
            })
            .collect::<Result<Vec<_>, NormalizeError>>()?;
        Ok(RuleTable {
            version: file.version,
            exact,
            patterns,
        })
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn exact_len(&self) -> usize {
        self.exact.len()
    }

    pub fn pattern_len(&self) -> usize {
        self.patterns.len()
    }

    /// Rating for a free-text verdict, or `None` when nothing matches.
    pub fn normalize_textual(&self, label: &str) -> Option<Rating> {
        let key = normalize_label(label);
        if key.is_empty() {
            return None;
        }
        if let Some(r) = self.exact.get(&key) {
            return Some(*r);
        }
        self.patterns.iter().find(|(re, _)| re.is_match(&key)).map(|(_, r)| *r)
    }
}
