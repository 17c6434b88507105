//! Heuristic sentence segmentation.
//!
//! A sentence ends at `.`, `!` or `?` (plus any closing quotes or brackets)
//! when followed by whitespace and an uppercase letter, or at a blank line.
//! Sentences outside the token bounds are dropped.

use std::sync::OnceLock;

use regex::Regex;

const CLOSERS: &str = "\"'”’)]";

fn split_paragraph(text: &str, out: &mut Vec<String>) {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let (_, c) = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let mut j = i + 1;
            while j < chars.len() && (matches!(chars[j].1, '.' | '!' | '?') || CLOSERS.contains(chars[j].1)) {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            if k > j && k < chars.len() && chars[k].1.is_uppercase() {
                let end = chars[j - 1].0 + chars[j - 1].1.len_utf8();
                out.push(text[start..end].trim().to_string());
                start = chars[k].0;
                i = k;
                continue;
            }
            i = j;
            continue;
        }
        i += 1;
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest.to_string());
    }
}

/// All sentences, before length filtering.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for para in text.split("\n\n") {
        let para = para.split_whitespace().collect::<Vec<_>>().join(" ");
        if !para.is_empty() {
            split_paragraph(&para, &mut out);
        }
    }
    out
}

/// Sentences with `min..=max` whitespace tokens, first occurrence only.
pub fn segment(text: &str, min_tokens: usize, max_tokens: usize) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    split_sentences(text)
        .into_iter()
        .filter(|s| (min_tokens..=max_tokens).contains(&s.split_whitespace().count()))
        .filter(|s| seen.insert(s.clone()))
        .collect()
}

/// Remove URLs from social media text before segmentation.
pub fn strip_urls(text: &str) -> String {
    static URL: OnceLock<Regex> = OnceLock::new();
    let re = URL.get_or_init(|| Regex::new(r"(?i)\b(?:https?://|www\.|pic\.twitter\.com/)\S+").expect("valid regex"));
    re.replace_all(text, " ").split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_terminal_punctuation_before_uppercase() {
        let s = split_sentences("The U.S. economy grew. It was fast! Was it? yes it was.");
        assert_eq!(s, vec!["The U.S. economy grew.", "It was fast!", "Was it? yes it was."]);
    }

    #[test]
    fn closing_quotes_stay_with_sentence() {
        let s = split_sentences("He said \"stop.\" Then he left.");
        assert_eq!(s, vec!["He said \"stop.\"", "Then he left."]);
    }

    #[test]
    fn paragraphs_split() {
        assert_eq!(split_sentences("Title here\n\nBody text."), vec!["Title here", "Body text."]);
    }

    #[test]
    fn token_bounds_and_dedup() {
        let text = "Too short. This sentence has exactly six tokens. This sentence has exactly six tokens.";
        assert_eq!(segment(text, 5, 60), vec!["This sentence has exactly six tokens."]);
        assert!(segment(text, 7, 60).is_empty());
    }

    #[test]
    fn urls_removed() {
        assert_eq!(
            strip_urls("Read this https://t.co/abc now www.example.com/x pic.twitter.com/zz"),
            "Read this now"
        );
    }
}
