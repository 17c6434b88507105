//! Markdown explanation templates.
//!
//! An explanation starts with a one-paragraph headline ("Site `x` seems
//! *credible* based on ..."). Reviews built on other reviews list their
//! children's headlines as a bullet list below; anything deeper is marked
//! "(explanation omitted)".

use std::sync::OnceLock;

use crate::algebra::{map_to_label, LabelScheme, SchemeSet, StanceLabel};
use crate::model::{DataItem, GroundSignal, ItemKind, Rating, ReviewGraph, SignalKind};
use crate::normalize::RatingBasis;

fn gradation() -> &'static LabelScheme {
    static SCHEME: OnceLock<LabelScheme> = OnceLock::new();
    SCHEME.get_or_init(|| {
        SchemeSet::builtin()
            .get("gradation")
            .cloned()
            .expect("gradation scheme is built in")
    })
}

/// "credible", "mostly credible", "uncertain", "mostly not credible" or "not credible".
pub fn phrase(rating: Rating) -> &'static str {
    map_to_label(&rating, gradation())
}

pub fn seems(rating: Rating) -> String {
    format!("seems *{}*", phrase(rating))
}

pub fn code(text: &str) -> String {
    format!("`{}`", text.replace('`', "'"))
}

fn link(text: &str, url: &str) -> String {
    if url.is_empty() {
        text.to_string()
    } else {
        format!("[{text}]({url})")
    }
}

/// How an item is named at the start of a headline.
pub fn subject(item: &DataItem) -> String {
    match item.kind() {
        ItemKind::Sentence { text } => format!("Sentence {}", code(text)),
        ItemKind::Claim { text } => format!("Claim {}", code(text)),
        ItemKind::WebSite { domain } => format!("Site {}", code(domain)),
        ItemKind::Article { url, title, .. } => {
            let name = if title.is_empty() { "article" } else { title };
            format!("Article {}", link(&format!("“{name}”"), url))
        }
        ItemKind::SocialMediaPost { url, .. } => format!("Post {}", link("post", url)),
        ItemKind::SentencePair { .. } => "Sentence pair".to_string(),
    }
}

pub fn no_signal(what: &str) -> String {
    format!("is *not verifiable*: {what}")
}

/// Predicate for a rating taken from one fact-check.
pub fn fact_check(rating: Rating, signal: &GroundSignal) -> String {
    let SignalKind::FactCheck { record, basis, .. } = signal.kind() else {
        return seems(rating);
    };
    let by = link(&record.fact_checker.name, record.fact_checker.url.as_deref().unwrap_or(""));
    let how = match basis {
        RatingBasis::Numeric => {
            let (worst, best) = record.scale();
            format!(
                "with normalised numeric ratingValue {} in range [{worst}-{best}]",
                record.rating_value.unwrap_or_default()
            )
        }
        RatingBasis::Textual => format!(
            "with textual rating '{}'",
            record.alternate_name.as_deref().unwrap_or_default()
        ),
        RatingBasis::Unmappable => "whose rating could not be interpreted".to_string(),
    };
    format!("{} based on a {} by {by} {how}", seems(rating), link("fact-check", &record.review_url))
}

/// Predicate for an aggregate of website reputation records.
pub fn website(rating: Rating, signals: &[&GroundSignal]) -> String {
    let raters: Vec<String> = signals
        .iter()
        .filter_map(|s| match s.kind() {
            SignalKind::WebSiteReputation {
                rater_name, review_url, ..
            } => Some(link(rater_name, review_url)),
            _ => None,
        })
        .collect();
    format!(
        "{} based on {} review(s) by external rater(s) {}",
        seems(rating),
        raters.len(),
        raters.join(" or ")
    )
}

pub fn precrawled(rating: Rating, domain: &str) -> String {
    format!("{} as it was published in site {}", seems(rating), code(domain))
}

/// Predicate for a linked sentence; `neighbor` is the matched text and
/// `neighbor_predicate` what its own review says.
pub fn linked(rating: Rating, stance: StanceLabel, neighbor: &str, neighbor_predicate: &str) -> String {
    let relation = match stance {
        StanceLabel::Agree => format!("{} as it agrees with sentence", seems(rating)),
        StanceLabel::Disagree => format!("{} as it disagrees with sentence", seems(rating)),
        StanceLabel::Discuss => "is similar to and discussed by".to_string(),
        StanceLabel::Unrelated => format!("{} as it is similar to, though unrelated to, sentence", seems(rating)),
    };
    format!("{relation}: {} that {neighbor_predicate}", code(neighbor))
}

/// Predicate for a decomposed item; `part` names the selected part.
pub fn decomposed(rating: Rating, part: &str) -> String {
    format!("{} based on its least credible {part}", seems(rating))
}

/// Headline followed by one bullet per child headline.
pub fn compose(headline: &str, children: &[(&str, bool)]) -> String {
    let mut out = headline.to_string();
    for (child, deeper) in children {
        out.push_str("\n\n- ");
        out.push_str(child);
        if *deeper {
            out.push_str(" (explanation omitted)");
        }
    }
    out
}

/// Explanation of review `id` in `graph`: its stored text, or a generic
/// sentence when the review carries none.
pub fn explain(graph: &ReviewGraph, id: &crate::model::NodeId) -> Option<String> {
    let review = graph.review(id)?;
    if !review.explanation().is_empty() && graph.bot(review.author()).is_some() {
        return Some(review.explanation().to_string());
    }
    let subj = graph
        .item(review.item_reviewed())
        .map(subject)
        .unwrap_or_else(|| format!("Item {}", code(review.item_reviewed().as_str())));
    let r = review.rating();
    Some(format!(
        "{subj} {} (rating {:.2}, confidence {:.2})",
        seems(r),
        r.value(),
        r.confidence()
    ))
}
