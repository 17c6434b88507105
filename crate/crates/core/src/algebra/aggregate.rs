use std::cmp::Ordering;

use super::AlgebraError;
use crate::model::{CredibilityReview, Rating};

/// Anything carrying a rating and a stable key for tie-breaking.
pub trait Rated {
    fn rating(&self) -> Rating;
    fn key(&self) -> &str;
}

impl Rated for CredibilityReview {
    fn rating(&self) -> Rating {
        CredibilityReview::rating(self)
    }
    fn key(&self) -> &str {
        self.id().as_str()
    }
}

impl<T: Rated> Rated for &T {
    fn rating(&self) -> Rating {
        (**self).rating()
    }
    fn key(&self) -> &str {
        (**self).key()
    }
}

/// Ordering where the "best" element for `most_confident` compares least:
/// higher confidence, then larger |value|, then smaller key.
fn confident_first<T: Rated>(a: &T, b: &T) -> Ordering {
    let (ra, rb) = (a.rating(), b.rating());
    rb.confidence()
        .total_cmp(&ra.confidence())
        .then(rb.value().abs().total_cmp(&ra.value().abs()))
        .then_with(|| a.key().cmp(b.key()))
}

/// Lower value, then higher confidence, then smaller key.
fn least_credible_first<T: Rated>(a: &T, b: &T) -> Ordering {
    let (ra, rb) = (a.rating(), b.rating());
    ra.value()
        .total_cmp(&rb.value())
        .then(rb.confidence().total_cmp(&ra.confidence()))
        .then_with(|| a.key().cmp(b.key()))
}

/// The element with the highest confidence.
pub fn most_confident<T: Rated>(reviews: &[T]) -> Result<&T, AlgebraError> {
    reviews
        .iter()
        .min_by(|a, b| confident_first(*a, *b))
        .ok_or(AlgebraError::NoSignals)
}

/// The element with the lowest value among those whose confidence exceeds
/// `floor`. Falls back to [`most_confident`] when none does.
pub fn least_credible<T: Rated>(reviews: &[T], floor: f64) -> Result<&T, AlgebraError> {
    if reviews.is_empty() {
        return Err(AlgebraError::NoSignals);
    }
    reviews
        .iter()
        .filter(|r| r.rating().confidence() > floor)
        .min_by(|a, b| least_credible_first(*a, *b))
        .map_or_else(|| most_confident(reviews), Ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, PartialEq)]
    struct R(&'static str, f64, f64);
    impl Rated for R {
        fn rating(&self) -> Rating {
            Rating::new(self.1, self.2).unwrap()
        }
        fn key(&self) -> &str {
            self.0
        }
    }

    #[test]
    fn most_confident_examples() {
        let rs = [R("a", 0.0, 0.3), R("b", 0.0, 0.9)];
        assert_eq!(most_confident(&rs).unwrap().0, "b");
        assert_eq!(most_confident(&rs[..1]).unwrap().0, "a");
        assert!(matches!(most_confident::<R>(&[]), Err(AlgebraError::NoSignals)));
    }

    #[test]
    fn most_confident_tie_breaks() {
        let rs = [R("b", 0.2, 0.9), R("c", -0.8, 0.9), R("a", 0.8, 0.9)];
        // equal confidence and |value| between c and a: lowest key wins
        assert_eq!(most_confident(&rs).unwrap().0, "a");
    }

    #[test]
    fn least_credible_examples() {
        let rs = [R("a", 0.8, 0.9), R("b", -1.0, 0.9)];
        assert_eq!(least_credible(&rs, 0.5).unwrap().0, "b");
        let low = [R("a", -1.0, 0.2), R("b", 0.5, 0.4)];
        assert_eq!(least_credible(&low, 0.5).unwrap().0, "b");
        let parts = [R("p1", 0.9, 0.9), R("p2", -0.6, 0.8), R("p3", 0.2, 0.9)];
        assert_eq!(least_credible(&parts, 0.5).unwrap().0, "p2");
        // confidence exactly at the floor does not exceed it
        let at = [R("a", -1.0, 0.5), R("b", 0.3, 0.6)];
        assert_eq!(least_credible(&at, 0.5).unwrap().0, "b");
        assert!(least_credible::<R>(&[], 0.5).is_err());
    }
}
