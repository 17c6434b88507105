use serde::{Deserialize, Serialize};

use super::StanceLabel;
use crate::model::{CredibilityReview, ModelError, Rating};

/// Cautious ("plus") mode: damp ratings produced from weak evidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CautionConfig {
    pub enabled: bool,
    /// Applied to value and confidence of an article rating that rests on the website alone.
    pub kappa_site: f64,
    /// Applied to the confidence of a linked rating whose stance is unrelated or discuss.
    pub kappa_stance: f64,
}

impl Default for CautionConfig {
    fn default() -> Self {
        CautionConfig {
            enabled: false,
            kappa_site: 0.5,
            kappa_stance: 0.5,
        }
    }
}

impl CautionConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, k) in [("kappa_site", self.kappa_site), ("kappa_stance", self.kappa_stance)] {
            if !(0.0..=1.0).contains(&k) {
                return Err(format!("{name} is {k}, expected [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Situation a rating was produced in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CautionContext {
    /// An article rating selected from its website part only.
    ArticleWebsiteOnly,
    /// A linked sentence rating with this stance.
    LinkedStance(StanceLabel),
    Other,
}

/// Adjusted rating plus a note naming the adjustment, or `None` when the
/// rating is left as is.
pub fn caution_adjustment(rating: Rating, context: CautionContext, cfg: &CautionConfig) -> Option<(Rating, String)> {
    if !cfg.enabled {
        return None;
    }
    let (value, confidence, note) = match context {
        CautionContext::ArticleWebsiteOnly => (
            rating.value() * cfg.kappa_site,
            rating.confidence() * cfg.kappa_site,
            format!("caution: rating based only on website, value and confidence scaled by {}", cfg.kappa_site),
        ),
        CautionContext::LinkedStance(s @ (StanceLabel::Unrelated | StanceLabel::Discuss)) => (
            rating.value(),
            rating.confidence() * cfg.kappa_stance,
            format!("caution: stance {s}, confidence scaled by {}", cfg.kappa_stance),
        ),
        CautionContext::LinkedStance(_) | CautionContext::Other => return None,
    };
    // kappas lie in [0, 1], so the scaled pair stays in range.
    let adjusted = Rating::new(value, confidence).expect("scaling by [0,1] keeps ratings in range");
    Some((adjusted, note))
}

/// Apply cautious mode to a finished review. The result is a new review
/// (with a new content-addressed id) whose adjustment notes name the change.
pub fn apply_caution(
    review: &CredibilityReview,
    context: CautionContext,
    cfg: &CautionConfig,
) -> Result<CredibilityReview, ModelError> {
    match caution_adjustment(review.rating(), context, cfg) {
        None => Ok(review.clone()),
        Some((rating, note)) => {
            let mut draft = review.to_draft();
            draft.rating = rating;
            draft.notes.push(note);
            draft.build()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{NodeId, ReviewDraft};
    use chrono::{TimeZone, Utc};

    fn cr(value: f64, confidence: f64) -> CredibilityReview {
        ReviewDraft::new(
            NodeId::new("item"),
            Rating::new(value, confidence).unwrap(),
            NodeId::new("bot"),
            Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap(),
        )
        .build()
        .unwrap()
    }

    const ON: CautionConfig = CautionConfig {
        enabled: true,
        kappa_site: 0.5,
        kappa_stance: 0.5,
    };

    #[test]
    fn website_only_article() {
        let out = apply_caution(&cr(-0.8, 0.9), CautionContext::ArticleWebsiteOnly, &ON).unwrap();
        assert!((out.rating().value() + 0.4).abs() < 1e-12);
        assert!((out.rating().confidence() - 0.45).abs() < 1e-12);
        assert_eq!(out.notes().len(), 1);
        assert!(out.notes()[0].contains("website"));
    }

    #[test]
    fn agree_stance_and_disabled_mode_are_identity() {
        let r = cr(-0.8, 0.9);
        assert_eq!(apply_caution(&r, CautionContext::LinkedStance(StanceLabel::Agree), &ON).unwrap(), r);
        let off = CautionConfig::default();
        for ctx in [
            CautionContext::ArticleWebsiteOnly,
            CautionContext::LinkedStance(StanceLabel::Unrelated),
            CautionContext::Other,
        ] {
            assert_eq!(apply_caution(&r, ctx, &off).unwrap(), r);
        }
    }

    #[test]
    fn discuss_stance_halves_confidence_only() {
        let out = apply_caution(&cr(0.6, 0.8), CautionContext::LinkedStance(StanceLabel::Discuss), &ON).unwrap();
        assert_eq!(out.rating().value(), 0.6);
        assert!((out.rating().confidence() - 0.4).abs() < 1e-12);
    }
}
