use serde_json::json;

use super::NodeId;

/// Describes a review-producing bot and the bots it depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BotDescriptor {
    id: NodeId,
    name: String,
    version: String,
    depends_on: Vec<NodeId>,
}

impl BotDescriptor {
    /// Identifier derived from name and version.
    pub fn id_for(name: &str, version: &str) -> NodeId {
        NodeId::content_addressed("bot", &json!({"name": name, "version": version}))
    }

    pub fn new(name: impl Into<String>, version: impl Into<String>, depends_on: Vec<NodeId>) -> Self {
        let name = name.into();
        let version = version.into();
        BotDescriptor {
            id: Self::id_for(&name, &version),
            name,
            version,
            depends_on,
        }
    }

    pub fn with_id(id: NodeId, name: String, version: String, depends_on: Vec<NodeId>) -> Self {
        BotDescriptor {
            id,
            name,
            version,
            depends_on,
        }
    }

    pub fn id(&self) -> &NodeId {
        &self.id
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn version(&self) -> &str {
        &self.version
    }
    pub fn depends_on(&self) -> &[NodeId] {
        &self.depends_on
    }
}
