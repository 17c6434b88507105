//! Domain types of the review graph and their JSON-LD form.

mod bot;
mod error;
mod graph;
mod id;
mod item;
pub mod jsonld;
mod rating;
mod review;
mod signal;

pub use bot::BotDescriptor;
pub use error::ModelError;
pub use graph::{validate_graph, Node, ReviewGraph, Violation, ViolationRule};
pub use id::NodeId;
pub use item::{normalize_domain, DataItem, ItemKind};
pub use jsonld::{parse_items, parse_jsonld, serialize_jsonld, ItemDocument, CONTEXT_DOCUMENT};
pub use rating::Rating;
pub use review::{CredibilityReview, LinkEvidence, ReviewDraft, REVIEW_ASPECT};
pub use signal::{GroundSignal, SignalKind};
