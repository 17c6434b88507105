use serde::{Deserialize, Serialize};

use super::ModelError;

/// A credibility value in `[-1, 1]` (`-1` not credible, `1` credible) and a
/// confidence in `[0, 1]` in the accuracy of that value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRating", into = "RawRating")]
pub struct Rating {
    value: f64,
    confidence: f64,
}

impl Rating {
    /// "No information": neutral value, zero confidence.
    pub const NONE: Rating = Rating {
        value: 0.0,
        confidence: 0.0,
    };

    pub fn new(value: f64, confidence: f64) -> Result<Self, ModelError> {
        check_range("ratingValue", value, -1.0, 1.0)?;
        check_range("confidence", confidence, 0.0, 1.0)?;
        Ok(Rating { value, confidence })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn confidence(&self) -> f64 {
        self.confidence
    }
}

fn check_range(field: &'static str, value: f64, min: f64, max: f64) -> Result<(), ModelError> {
    // NaN fails both comparisons and is rejected here too.
    if value >= min && value <= max {
        Ok(())
    } else {
        Err(ModelError::OutOfRange {
            field,
            value,
            min,
            max,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RawRating {
    value: f64,
    confidence: f64,
}

impl TryFrom<RawRating> for Rating {
    type Error = ModelError;
    fn try_from(raw: RawRating) -> Result<Self, Self::Error> {
        Rating::new(raw.value, raw.confidence)
    }
}

impl From<Rating> for RawRating {
    fn from(r: Rating) -> Self {
        RawRating {
            value: r.value,
            confidence: r.confidence,
        }
    }
}
