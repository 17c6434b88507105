//! Fact-checker verdicts to credibility ratings.
//!
//! Numeric verdicts are rescaled affinely from `[worst, best]` onto `[-1, 1]`.
//! Textual verdicts go through a rule table shipped as
//! `data/claim_rules.toml`: exact labels first, then ordered patterns.

mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use rules::{default_rules, RuleTable};

use crate::model::{GroundSignal, Rating};

#[derive(Debug, Error, PartialEq)]
pub enum NormalizeError {
    #[error("unmappable: {0}")]
    Unmappable(String),
    #[error("rule table: {0}")]
    RuleTable(String),
}

/// Identity of the organisation publishing a fact-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactChecker {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
}

/// The fields of a schema.org `ClaimReview` this crate uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReviewRecord {
    #[serde(alias = "claimReviewed")]
    pub claim_text: String,
    #[serde(default, alias = "ratingValue", skip_serializing_if = "Option::is_none")]
    pub rating_value: Option<f64>,
    #[serde(default, alias = "bestRating", skip_serializing_if = "Option::is_none")]
    pub best_rating: Option<f64>,
    #[serde(default, alias = "worstRating", skip_serializing_if = "Option::is_none")]
    pub worst_rating: Option<f64>,
    #[serde(default, alias = "alternateName", skip_serializing_if = "Option::is_none")]
    pub alternate_name: Option<String>,
    #[serde(alias = "author")]
    pub fact_checker: FactChecker,
    #[serde(alias = "url")]
    pub review_url: String,
}

/// schema.org defaults when a numeric rating omits its scale.
pub const DEFAULT_BEST_RATING: f64 = 5.0;
pub const DEFAULT_WORST_RATING: f64 = 1.0;

impl ClaimReviewRecord {
    pub fn validate(&self) -> Result<(), String> {
        if self.claim_text.trim().is_empty() {
            return Err("claim_text is empty".into());
        }
        if self.rating_value.is_none() && self.alternate_name.as_deref().is_none_or(|s| s.trim().is_empty()) {
            return Err("neither rating_value nor alternate_name present".into());
        }
        if self.rating_value.is_some() {
            let (worst, best) = self.scale();
            if best <= worst {
                return Err(format!("best_rating {best} must exceed worst_rating {worst}"));
            }
        }
        Ok(())
    }

    /// `(worst, best)` with schema.org defaults applied.
    pub fn scale(&self) -> (f64, f64) {
        (
            self.worst_rating.unwrap_or(DEFAULT_WORST_RATING),
            self.best_rating.unwrap_or(DEFAULT_BEST_RATING),
        )
    }
}

/// Which part of a record produced its normalized rating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatingBasis {
    Numeric,
    Textual,
    Unmappable,
}

impl RatingBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            RatingBasis::Numeric => "numeric",
            RatingBasis::Textual => "textual",
            RatingBasis::Unmappable => "unmappable",
        }
    }
}

impl fmt::Display for RatingBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RatingBasis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "numeric" => Ok(RatingBasis::Numeric),
            "textual" => Ok(RatingBasis::Textual),
            "unmappable" => Ok(RatingBasis::Unmappable),
            other => Err(format!("unknown normalization basis {other:?}")),
        }
    }
}

/// Affine rescale of `value` from `[worst, best]` onto `[-1, 1]`, confidence 1.
pub fn normalize_numeric(value: f64, worst: f64, best: f64) -> Result<Rating, NormalizeError> {
    if !(best > worst) || !best.is_finite() || !worst.is_finite() {
        return Err(NormalizeError::Unmappable(format!("degenerate range [{worst}, {best}]")));
    }
    if !(worst..=best).contains(&value) {
        return Err(NormalizeError::Unmappable(format!("{value} outside [{worst}, {best}]")));
    }
    let scaled = 2.0 * (value - worst) / (best - worst) - 1.0;
    Rating::new(scaled.clamp(-1.0, 1.0), 1.0).map_err(|e| NormalizeError::Unmappable(e.to_string()))
}

/// Textual verdict lookup against the shipped table; `None` means unmappable.
pub fn normalize_textual(label: &str) -> Option<Rating> {
    default_rules().normalize_textual(label)
}

/// Normalize a record with the shipped rule table.
pub fn claimreview_to_signal(record: ClaimReviewRecord) -> GroundSignal {
    claimreview_to_signal_with(record, default_rules())
}

/// Normalize a record. When both a numeric and a textual verdict map and
/// their signs disagree the textual verdict wins; otherwise the numeric one
/// is used. Records with no mappable verdict get `Rating::NONE`.
pub fn claimreview_to_signal_with(record: ClaimReviewRecord, rules: &RuleTable) -> GroundSignal {
    let numeric = record.rating_value.and_then(|v| {
        let (worst, best) = record.scale();
        normalize_numeric(v, worst, best).ok()
    });
    let textual = record.alternate_name.as_deref().and_then(|l| rules.normalize_textual(l));
    let (rating, basis) = match (numeric, textual) {
        (Some(n), Some(t)) if n.value() * t.value() < 0.0 => (t, RatingBasis::Textual),
        (Some(n), _) => (n, RatingBasis::Numeric),
        (None, Some(t)) => (t, RatingBasis::Textual),
        (None, None) => (Rating::NONE, RatingBasis::Unmappable),
    };
    GroundSignal::fact_check(record, rating, basis)
}
