//! Credibility review bots.
//!
//! | bot | reviews | based on |
//! |-----|---------|----------|
//! | `LookupBot_ClaimReview` | Claim, Sentence | fact-checks with the same normalized text |
//! | `LookupBot_WebSite` | WebSite | reputation records |
//! | `LinkBot_PreCrawled` | Sentence | the site a crawled sentence appeared on |
//! | `LinkBot_SemSim` | Sentence | similar fact-checked or crawled sentences |
//! | `DecBot_Article` | Article | its sentences and website |
//! | `DecBot_SocMedia` | SocialMediaPosting | its sentences, linked items and website |
//!
//! [`Engine`] runs them in-process and returns a [`ReviewGraph`] per request.

mod config;
mod engine;
pub mod explain;
mod registry;
pub mod segment;

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use thiserror::Error;

pub use config::BotConfig;
pub use engine::{Engine, EngineBuilder};
pub use registry::Registry;

use crate::algebra::{AlgebraError, Rated};
use crate::model::{CredibilityReview, ModelError, Node, NodeId, Rating, ReviewGraph};
use crate::nlp::NlpError;

/// Note carried by reviews that rest on no signal at all.
pub const NO_SIGNAL: &str = "no signal";

#[derive(Debug, Error)]
pub enum BotError {
    #[error("no registered bot reviews {0}")]
    Unsupported(String),
    #[error("bot {0} is not registered")]
    NotRegistered(&'static str),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("backend failure: {source}")]
    Backend {
        #[source]
        source: NlpError,
        /// Reviews finished before the failure.
        partial: Vec<CredibilityReview>,
    },
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BotKind {
    ClaimReview,
    WebSite,
    PreCrawled,
    SemSim,
    Article,
    SocialMedia,
}

impl BotKind {
    pub const ALL: [BotKind; 6] = [
        BotKind::ClaimReview,
        BotKind::WebSite,
        BotKind::PreCrawled,
        BotKind::SemSim,
        BotKind::Article,
        BotKind::SocialMedia,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BotKind::ClaimReview => "LookupBot_ClaimReview",
            BotKind::WebSite => "LookupBot_WebSite",
            BotKind::PreCrawled => "LinkBot_PreCrawled",
            BotKind::SemSim => "LinkBot_SemSim",
            BotKind::Article => "DecBot_Article",
            BotKind::SocialMedia => "DecBot_SocMedia",
        }
    }

    pub fn dependencies(self) -> &'static [BotKind] {
        match self {
            BotKind::ClaimReview | BotKind::WebSite => &[],
            BotKind::PreCrawled => &[BotKind::WebSite],
            BotKind::SemSim => &[BotKind::ClaimReview, BotKind::PreCrawled],
            BotKind::Article => &[BotKind::SemSim, BotKind::WebSite],
            BotKind::SocialMedia => &[BotKind::Article, BotKind::SemSim, BotKind::WebSite],
        }
    }

    pub fn from_name(name: &str) -> Option<BotKind> {
        BotKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Source of `dateCreated` timestamps. A fixed clock makes graphs reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Clock {
    #[default]
    System,
    Fixed(DateTime<Utc>),
}

impl Clock {
    pub fn now(&self) -> DateTime<Utc> {
        match self {
            Clock::System => Utc::now(),
            Clock::Fixed(t) => *t,
        }
    }
}

/// A review plus the nodes its provenance refers to.
#[derive(Debug, Clone)]
pub struct Reviewed {
    pub review: CredibilityReview,
    pub nodes: BTreeMap<NodeId, Node>,
    /// First paragraph of the explanation, reused by parent templates.
    pub headline: String,
    /// The part of the headline after the subject ("seems *credible* ...").
    pub predicate: String,
}

impl Reviewed {
    pub fn rating(&self) -> Rating {
        self.review.rating()
    }

    pub fn id(&self) -> &NodeId {
        self.review.id()
    }

    /// Whether this review rests on at least one signal.
    pub fn has_signal(&self) -> bool {
        !self.review.notes().iter().any(|n| n == NO_SIGNAL)
    }

    pub fn into_graph(self) -> ReviewGraph {
        let root = self.review.id().clone();
        let mut nodes = self.nodes;
        nodes.insert(root.clone(), Node::Review(self.review));
        ReviewGraph::new(root, nodes.into_values())
    }
}

impl Rated for Reviewed {
    fn rating(&self) -> Rating {
        self.review.rating()
    }

    fn key(&self) -> &str {
        self.review.id().as_str()
    }
}
