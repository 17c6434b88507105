use chrono::{DateTime, Utc};
use serde_json::json;

use super::{ModelError, NodeId, Rating};
use crate::algebra::StanceLabel;

/// Every credibility review has this `reviewAspect`.
pub const REVIEW_ASPECT: &str = "credibility";

/// Stance and similarity recorded when a review was obtained by linking one
/// sentence to another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkEvidence {
    pub stance: StanceLabel,
    pub similarity: f64,
}

/// A credibility review of a data item: rating, confidence, provenance and
/// the bot that authored it. Immutable; build one with [`ReviewDraft`].
#[derive(Debug, Clone, PartialEq)]
pub struct CredibilityReview {
    id: NodeId,
    item_reviewed: NodeId,
    rating: Rating,
    is_based_on: Vec<NodeId>,
    author: NodeId,
    explanation: String,
    created_at: DateTime<Utc>,
    link: Option<LinkEvidence>,
    notes: Vec<String>,
}

/// Mutable precursor of a [`CredibilityReview`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReviewDraft {
    pub item_reviewed: NodeId,
    pub rating: Rating,
    pub is_based_on: Vec<NodeId>,
    pub author: NodeId,
    pub explanation: String,
    pub created_at: DateTime<Utc>,
    pub link: Option<LinkEvidence>,
    pub notes: Vec<String>,
}

impl ReviewDraft {
    pub fn new(item_reviewed: NodeId, rating: Rating, author: NodeId, created_at: DateTime<Utc>) -> Self {
        ReviewDraft {
            item_reviewed,
            rating,
            is_based_on: Vec::new(),
            author,
            explanation: String::new(),
            created_at,
            link: None,
            notes: Vec::new(),
        }
    }

    pub fn based_on(mut self, id: NodeId) -> Self {
        self.is_based_on.push(id);
        self
    }

    pub fn link(mut self, link: LinkEvidence) -> Self {
        self.link = Some(link);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn explanation(mut self, text: impl Into<String>) -> Self {
        self.explanation = text.into();
        self
    }

    fn content(&self) -> serde_json::Value {
        json!({
            "item": self.item_reviewed,
            "value": self.rating.value(),
            "confidence": self.rating.confidence(),
            "basedOn": self.is_based_on,
            "author": self.author,
            "explanation": self.explanation,
            "link": self.link.map(|l| json!({"stance": l.stance.as_str(), "similarity": l.similarity})),
            "notes": self.notes,
        })
    }

    fn check(&self) -> Result<(), ModelError> {
        if let Some(link) = self.link {
            if !(0.0..=1.0).contains(&link.similarity) {
                return Err(ModelError::OutOfRange {
                    field: "similarity",
                    value: link.similarity,
                    min: 0.0,
                    max: 1.0,
                });
            }
        }
        Ok(())
    }

    /// Finish with a content-addressed identifier. The timestamp does not
    /// take part in the identifier.
    pub fn build(self) -> Result<CredibilityReview, ModelError> {
        let id = NodeId::content_addressed("cr", &self.content());
        CredibilityReview::with_id(id, self)
    }
}

impl CredibilityReview {
    /// Keep an externally assigned identifier (used when parsing documents).
    pub fn with_id(id: NodeId, draft: ReviewDraft) -> Result<Self, ModelError> {
        draft.check()?;
        Ok(CredibilityReview {
            id,
            item_reviewed: draft.item_reviewed,
            rating: draft.rating,
            is_based_on: draft.is_based_on,
            author: draft.author,
            explanation: draft.explanation,
            created_at: draft.created_at,
            link: draft.link,
            notes: draft.notes,
        })
    }

    pub fn to_draft(&self) -> ReviewDraft {
        ReviewDraft {
            item_reviewed: self.item_reviewed.clone(),
            rating: self.rating,
            is_based_on: self.is_based_on.clone(),
            author: self.author.clone(),
            explanation: self.explanation.clone(),
            created_at: self.created_at,
            link: self.link,
            notes: self.notes.clone(),
        }
    }

    pub fn id(&self) -> &NodeId {
        &self.id
    }
    pub fn item_reviewed(&self) -> &NodeId {
        &self.item_reviewed
    }
    pub fn rating(&self) -> Rating {
        self.rating
    }
    pub fn is_based_on(&self) -> &[NodeId] {
        &self.is_based_on
    }
    pub fn author(&self) -> &NodeId {
        &self.author
    }
    pub fn explanation(&self) -> &str {
        &self.explanation
    }
    pub fn review_aspect(&self) -> &'static str {
        REVIEW_ASPECT
    }
    pub fn created_at(&self) -> DateTime<Utc> {
        self.created_at
    }
    pub fn link(&self) -> Option<LinkEvidence> {
        self.link
    }
    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}
