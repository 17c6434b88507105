//! Composable credibility reviews.
//!
//! Bots look up, link and decompose web content into graphs of
//! [`CredibilityReview`](model::CredibilityReview)s. Every review carries a
//! rating in `[-1, 1]`, a confidence in `[0, 1]`, and `isBasedOn` provenance
//! that can be retraced down to ground credibility signals (fact-checks,
//! website reputation records, pre-crawled sentences). Graphs are exchanged
//! as JSON-LD using schema.org terms plus a small extension vocabulary.
//!
//! Module map:
//!
//! - [`model`]: domain types and JSON-LD (de)serialization
//! - [`algebra`]: aggregation, stance polarity, similarity revision, label schemes
//! - [`normalize`]: fact-checker verdicts to ratings
//! - [`store`]: ground-signal storage and ingestion
//! - [`nlp`]: sentence encoders, stance detectors and the nearest-neighbour index
//! - [`bots`]: the lookup, linking and decomposing bots plus explanations
//! - [`eval`]: dataset readers, prediction pipeline and metrics

pub mod algebra;
pub mod bots;
pub mod eval;
pub mod model;
pub mod nlp;
pub mod normalize;
pub mod par;
pub mod store;

pub use algebra::StanceLabel;
pub use model::{CredibilityReview, DataItem, GroundSignal, NodeId, Rating, ReviewGraph};
