use serde_json::json;

use super::{normalize_domain, ModelError, NodeId, Rating};
use crate::normalize::{ClaimReviewRecord, RatingBasis};

/// A trusted record that is not itself a credibility review. Provenance
/// chains terminate in these.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundSignal {
    id: NodeId,
    kind: SignalKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignalKind {
    FactCheck {
        record: ClaimReviewRecord,
        rating: Rating,
        basis: RatingBasis,
    },
    WebSiteReputation {
        domain: String,
        rater_name: String,
        rating: Rating,
        review_url: String,
    },
    PrecrawledSentence {
        text: String,
        source_url: String,
        source_domain: String,
        crawl_date: String,
    },
}

impl SignalKind {
    pub fn type_name(&self) -> &'static str {
        match self {
            SignalKind::FactCheck { .. } => "ClaimReview",
            SignalKind::WebSiteReputation { .. } => "WebSiteReputation",
            SignalKind::PrecrawledSentence { .. } => "PrecrawledSentence",
        }
    }
}

impl GroundSignal {
    /// Wrap a normalized fact-check. Use
    /// [`claimreview_to_signal`](crate::normalize::claimreview_to_signal) to
    /// obtain the rating and basis.
    pub fn fact_check(record: ClaimReviewRecord, rating: Rating, basis: RatingBasis) -> Self {
        let content = json!({"type": "ClaimReview", "record": record});
        GroundSignal {
            id: NodeId::content_addressed("factcheck", &content),
            kind: SignalKind::FactCheck {
                record,
                rating,
                basis,
            },
        }
    }

    pub fn website_reputation(
        domain: &str,
        rater_name: impl Into<String>,
        rating: Rating,
        review_url: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let domain = normalize_domain(domain)?;
        let rater_name = rater_name.into();
        let review_url = review_url.into();
        let content = json!({
            "type": "WebSiteReputation", "domain": domain, "rater": rater_name,
            "value": rating.value(), "confidence": rating.confidence(), "url": review_url,
        });
        Ok(GroundSignal {
            id: NodeId::content_addressed("site-rating", &content),
            kind: SignalKind::WebSiteReputation {
                domain,
                rater_name,
                rating,
                review_url,
            },
        })
    }

    /// A sentence seen on a crawled page. The source domain is taken from the URL.
    pub fn precrawled(
        text: impl Into<String>,
        source_url: impl Into<String>,
        crawl_date: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(ModelError::EmptyText("PrecrawledSentence"));
        }
        let source_url = source_url.into();
        let source_domain = normalize_domain(&source_url)?;
        let crawl_date = crawl_date.into();
        let content = json!({
            "type": "PrecrawledSentence", "text": text, "url": source_url, "date": crawl_date,
        });
        Ok(GroundSignal {
            id: NodeId::content_addressed("crawled", &content),
            kind: SignalKind::PrecrawledSentence {
                text,
                source_url,
                source_domain,
                crawl_date,
            },
        })
    }

    /// Rebuild a signal read from a document, keeping its identifier.
    pub fn with_id(id: NodeId, kind: SignalKind) -> Result<Self, ModelError> {
        match &kind {
            SignalKind::WebSiteReputation { domain, .. }
            | SignalKind::PrecrawledSentence {
                source_domain: domain,
                ..
            } => {
                if &normalize_domain(domain)? != domain {
                    return Err(ModelError::InvalidDomain(domain.clone()));
                }
            }
            SignalKind::FactCheck { .. } => {}
        }
        Ok(GroundSignal { id, kind })
    }

    pub fn id(&self) -> &NodeId {
        &self.id
    }

    pub fn kind(&self) -> &SignalKind {
        &self.kind
    }

    /// The rating a signal carries directly, if any.
    pub fn rating(&self) -> Option<Rating> {
        match &self.kind {
            SignalKind::FactCheck { rating, .. } | SignalKind::WebSiteReputation { rating, .. } => {
                Some(*rating)
            }
            SignalKind::PrecrawledSentence { .. } => None,
        }
    }
}
