use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Opaque, IRI-shaped node identifier.
///
/// Identifiers minted by this crate are content addressed:
/// `urn:lcr:<kind>:<hex>` where the hex part is a truncated SHA-256 of the
/// node's canonical JSON content. Identical content therefore yields the same
/// identifier and deduplicates within a graph. Identifiers read from external
/// documents are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn content_addressed(kind: &str, content: &serde_json::Value) -> Self {
        // serde_json maps are BTreeMap-backed, so this is canonical key order.
        let bytes = serde_json::to_vec(content).expect("JSON values always serialize");
        let digest = Sha256::digest(&bytes);
        NodeId(format!("urn:lcr:{kind}:{}", hex::encode(&digest[..16])))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}
