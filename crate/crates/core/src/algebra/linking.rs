use serde::{Deserialize, Serialize};

use super::{AlgebraError, StanceLabel};
use crate::model::Rating;

/// Per-stance factors applied to a similarity score. Each lies in `[0, 1]`,
/// so revision can only lower similarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReviseMultipliers {
    pub agree: f64,
    pub disagree: f64,
    pub discuss: f64,
    pub unrelated: f64,
}

impl Default for ReviseMultipliers {
    fn default() -> Self {
        ReviseMultipliers {
            agree: 1.0,
            disagree: 1.0,
            discuss: 0.75,
            unrelated: 0.25,
        }
    }
}

impl ReviseMultipliers {
    pub fn for_stance(&self, stance: StanceLabel) -> f64 {
        match stance {
            StanceLabel::Agree => self.agree,
            StanceLabel::Disagree => self.disagree,
            StanceLabel::Discuss => self.discuss,
            StanceLabel::Unrelated => self.unrelated,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for s in StanceLabel::ALL {
            let m = self.for_stance(s);
            if !(0.0..=1.0).contains(&m) {
                return Err(format!("multiplier for {s} is {m}, expected [0, 1]"));
            }
        }
        Ok(())
    }
}

/// `-1` when the stance inverts the neighbour's rating, `+1` otherwise.
pub fn polarity(stance: StanceLabel) -> i8 {
    match stance {
        StanceLabel::Disagree => -1,
        StanceLabel::Agree | StanceLabel::Discuss | StanceLabel::Unrelated => 1,
    }
}

/// Similarity discounted by how the two texts relate.
pub fn revise_similarity(stance: StanceLabel, sim: f64, m: &ReviseMultipliers) -> Result<f64, AlgebraError> {
    if !(0.0..=1.0).contains(&sim) {
        return Err(AlgebraError::SimilarityOutOfRange(sim));
    }
    Ok((sim * m.for_stance(stance)).clamp(0.0, sim))
}

/// Rating for sentence `s_i` derived from the review of a linked sentence
/// `s_j`: the value keeps its magnitude and flips sign on disagreement, the
/// confidence is scaled by the revised similarity.
pub fn combine_linked(
    neighbor: Rating,
    stance: StanceLabel,
    sim: f64,
    m: &ReviseMultipliers,
) -> Result<Rating, AlgebraError> {
    let value = neighbor.value() * f64::from(polarity(stance));
    let confidence = neighbor.confidence() * revise_similarity(stance, sim, m)?;
    Ok(Rating::new(value, confidence)?)
}
