//! Pure functions over ratings.

mod aggregate;
mod caution;
mod labels;
mod linking;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use aggregate::{least_credible, most_confident, Rated};
pub use caution::{apply_caution, caution_adjustment, CautionConfig, CautionContext};
pub use labels::{map_to_label, Interval, LabelRule, LabelScheme, SchemeSet};
pub use linking::{combine_linked, polarity, revise_similarity, ReviseMultipliers};

use crate::model::ModelError;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("no signals")]
    NoSignals,
    #[error("similarity {0} is outside [0, 1]")]
    SimilarityOutOfRange(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("label scheme {name}: {reason}")]
    Scheme { name: String, reason: String },
}

/// Relation of one text to another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StanceLabel {
    Agree,
    Disagree,
    Discuss,
    Unrelated,
}

impl StanceLabel {
    pub const ALL: [StanceLabel; 4] = [
        StanceLabel::Agree,
        StanceLabel::Disagree,
        StanceLabel::Discuss,
        StanceLabel::Unrelated,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StanceLabel::Agree => "agree",
            StanceLabel::Disagree => "disagree",
            StanceLabel::Discuss => "discuss",
            StanceLabel::Unrelated => "unrelated",
        }
    }
}

impl fmt::Display for StanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StanceLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "agree" => Ok(StanceLabel::Agree),
            "disagree" => Ok(StanceLabel::Disagree),
            "discuss" => Ok(StanceLabel::Discuss),
            "unrelated" => Ok(StanceLabel::Unrelated),
            other => Err(format!("unknown stance label {other:?}")),
        }
    }
}
