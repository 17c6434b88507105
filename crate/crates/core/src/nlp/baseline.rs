//! Dependency-free backends.
//!
//! The encoder hashes character 3-, 4- and 5-grams of the lowercased,
//! space-padded sentence into 512 signed buckets (FNV-1a 64). The stance
//! detector compares token sets and negation markers.

use std::collections::HashSet;

use super::{NlpError, SentenceEncoder, SentenceVector, StanceDetector, StanceJudgment};
use crate::algebra::StanceLabel;
use crate::par::{self, ExecMode};

pub const BASELINE_DIM: usize = 512;
pub const BASELINE_BACKEND_ID: &str = "baseline-char-ngram-3-5-fnv1a-d512-v1";

const UNRELATED_BELOW: f64 = 0.15;
const AGREE_FROM: f64 = 0.6;
const NEGATIONS: [&str; 5] = ["not", "no", "never", "fake", "false"];

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HashingEncoder {
    mode: ExecMode,
}

impl HashingEncoder {
    pub fn new(mode: ExecMode) -> Self {
        HashingEncoder { mode }
    }

    /// Raw bucket counts before normalization.
    pub fn features(sentence: &str) -> Result<Vec<f32>, NlpError> {
        let norm = sentence.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ");
        if norm.is_empty() {
            return Err(NlpError::EmptyText);
        }
        let chars: Vec<char> = format!(" {norm} ").chars().collect();
        let mut out = vec![0f32; BASELINE_DIM];
        let mut buf = String::new();
        for n in 3..=5 {
            for w in chars.windows(n) {
                buf.clear();
                buf.extend(w);
                let h = fnv1a(buf.as_bytes());
                let bucket = (h % BASELINE_DIM as u64) as usize;
                out[bucket] += if h >> 63 == 0 { 1.0 } else { -1.0 };
            }
        }
        Ok(out)
    }

    fn encode_one(sentence: &str) -> Result<SentenceVector, NlpError> {
        let f = Self::features(sentence)?;
        // Signed collisions can cancel out entirely; fall back to unsigned counts.
        SentenceVector::from_raw(f).or_else(|_| {
            let mut f = vec![0f32; BASELINE_DIM];
            let padded: Vec<char> = format!(" {} ", sentence.to_lowercase()).chars().collect();
            for w in padded.windows(3) {
                let s: String = w.iter().collect();
                f[(fnv1a(s.as_bytes()) % BASELINE_DIM as u64) as usize] += 1.0;
            }
            SentenceVector::from_raw(f)
        })
    }
}

impl SentenceEncoder for HashingEncoder {
    fn backend_id(&self) -> &str {
        BASELINE_BACKEND_ID
    }

    fn dim(&self) -> usize {
        BASELINE_DIM
    }

    fn encode_batch(&self, sentences: &[&str]) -> Result<Vec<SentenceVector>, NlpError> {
        par::map(self.mode, sentences, |s| Self::encode_one(s)).into_iter().collect()
    }
}

/// Lowercased word tokens; apostrophes stay inside words so "isn't" survives.
pub fn tokens(text: &str) -> Vec<String> {
    text.to_lowercase()
        .replace('\u{2019}', "'")
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

fn negations(tokens: &[String]) -> usize {
    tokens
        .iter()
        .filter(|t| NEGATIONS.contains(&t.as_str()) || t.ends_with("n't"))
        .count()
}

fn jaccard(a: &HashSet<&str>, b: &HashSet<&str>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BaselineStance;

impl BaselineStance {
    pub fn judge(source: &str, target: &str) -> StanceJudgment {
        let (ta, tb) = (tokens(source), tokens(target));
        let sa: HashSet<&str> = ta.iter().map(String::as_str).collect();
        let sb: HashSet<&str> = tb.iter().map(String::as_str).collect();
        let j = jaccard(&sa, &sb);
        let label = if j < UNRELATED_BELOW {
            StanceLabel::Unrelated
        } else if negations(&ta) % 2 != negations(&tb) % 2 {
            StanceLabel::Disagree
        } else if j >= AGREE_FROM {
            StanceLabel::Agree
        } else {
            StanceLabel::Discuss
        };
        let score = if label == StanceLabel::Unrelated { 1.0 - j } else { j };
        StanceJudgment { label, score }
    }
}

impl StanceDetector for BaselineStance {
    fn stance_batch(&self, pairs: &[(&str, &str)]) -> Result<Vec<StanceJudgment>, NlpError> {
        pairs
            .iter()
            .map(|(s, t)| {
                if s.trim().is_empty() || t.trim().is_empty() {
                    Err(NlpError::EmptyText)
                } else {
                    Ok(Self::judge(s, t))
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::similarity;

    fn enc(s: &str) -> SentenceVector {
        HashingEncoder::default().encode(s).unwrap()
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn encoding_is_deterministic_and_unit() {
        let a = enc("The cat sat on the mat.");
        assert_eq!(a, enc("The cat sat on the mat."));
        assert_eq!(a.dim(), BASELINE_DIM);
        assert!((a.norm() - 1.0).abs() < 1e-6);
        assert_eq!(similarity(&a, &a).unwrap(), 1.0);
        assert!(matches!(HashingEncoder::default().encode("  "), Err(NlpError::EmptyText)));
    }

    #[test]
    fn near_paraphrase_scores_higher() {
        let base = enc("the cat sat");
        let near = similarity(&base, &enc("the cat sat down")).unwrap();
        let far = similarity(&base, &enc("quarterly earnings rose")).unwrap();
        assert!(near > far, "{near} <= {far}");
    }

    #[test]
    fn short_inputs_encode() {
        assert!((enc("a").norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn stance_rules() {
        let s = |a, b| BaselineStance::judge(a, b).label;
        assert_eq!(s("the earth is flat", "the earth is flat"), StanceLabel::Agree);
        assert_eq!(s("the earth is flat", "the earth is not flat"), StanceLabel::Disagree);
        assert_eq!(s("the earth is flat", "stock markets fell today"), StanceLabel::Unrelated);
        assert_eq!(s("the earth isn't flat", "the earth is flat"), StanceLabel::Disagree);
        assert_eq!(s("the earth is flat", "scientists say the earth is round and old"), StanceLabel::Discuss);
    }
}
