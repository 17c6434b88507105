use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use super::AlgebraError;
use crate::model::Rating;

const BUILTIN_SCHEMES: &str = include_str!("../../data/label_schemes.toml");

/// A real interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

impl FromStr for Interval {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || format!("bad interval {s:?}, expected e.g. \"[0.25, 0.5)\"");
        let lo_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(err()),
        };
        let hi_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(err()),
        };
        let inner = &s[1..s.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        let lo: f64 = a.trim().parse().map_err(|_| err())?;
        let hi: f64 = b.trim().parse().map_err(|_| err())?;
        if lo > hi || lo.is_nan() || hi.is_nan() {
            return Err(err());
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelRule {
    pub label: String,
    pub value: Interval,
    pub confidence: Interval,
}

impl LabelRule {
    fn matches(&self, value: f64, confidence: f64) -> bool {
        self.value.contains(value) && self.confidence.contains(confidence)
    }
}

/// An ordered, total mapping from ratings to labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelScheme {
    name: String,
    rules: Vec<LabelRule>,
}

impl LabelScheme {
    /// Build a scheme, checking that the rules cover `[-1,1] x [0,1]`.
    pub fn new(name: impl Into<String>, rules: Vec<LabelRule>) -> Result<Self, AlgebraError> {
        let scheme = LabelScheme {
            name: name.into(),
            rules,
        };
        if let Some((v, c)) = scheme.uncovered_point() {
            return Err(AlgebraError::Scheme {
                name: scheme.name,
                reason: format!("no rule covers ratingValue {v}, confidence {c}"),
            });
        }
        Ok(scheme)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rules(&self) -> &[LabelRule] {
        &self.rules
    }

    /// Distinct labels in rule order.
    pub fn labels(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rules {
            if !out.contains(&r.label.as_str()) {
                out.push(&r.label);
            }
        }
        out
    }

    fn first_match(&self, value: f64, confidence: f64) -> Option<&LabelRule> {
        self.rules.iter().find(|r| r.matches(value, confidence))
    }

    /// Rule membership is constant on every open cell between consecutive
    /// interval endpoints, so probing each endpoint and each cell midpoint on
    /// both axes decides coverage exactly.
    fn uncovered_point(&self) -> Option<(f64, f64)> {
        let probes = |lo: f64, hi: f64, ends: Vec<f64>| {
            let mut pts: Vec<f64> = ends.into_iter().filter(|x| (lo..=hi).contains(x)).collect();
            pts.extend([lo, hi]);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let mids: Vec<f64> = pts.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
            pts.extend(mids);
            pts
        };
        let values = probes(-1.0, 1.0, self.rules.iter().flat_map(|r| [r.value.lo, r.value.hi]).collect());
        let confs = probes(0.0, 1.0, self.rules.iter().flat_map(|r| [r.confidence.lo, r.confidence.hi]).collect());
        for &v in &values {
            for &c in &confs {
                if self.first_match(v, c).is_none() {
                    return Some((v, c));
                }
            }
        }
        None
    }
}

/// Label for `rating` under `scheme`; the first matching rule wins.
pub fn map_to_label<'a>(rating: &Rating, scheme: &'a LabelScheme) -> &'a str {
    scheme
        .first_match(rating.value(), rating.confidence())
        .map(|r| r.label.as_str())
        .expect("label schemes are checked to be total at construction")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    #[allow(dead_code)]
    version: Option<u32>,
    #[serde(default)]
    scheme: Vec<SchemeEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeEntry {
    name: String,
    rules: Vec<RuleEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleEntry {
    label: String,
    value: String,
    confidence: String,
}

/// Named label schemes, loadable from TOML.
#[derive(Debug, Clone, Default)]
pub struct SchemeSet {
    schemes: BTreeMap<String, LabelScheme>,
}

impl SchemeSet {
    /// `coinform250`, `clef18`, `fakenewsnet` and the explanation `gradation`.
    pub fn builtin() -> Self {
        Self::from_toml(BUILTIN_SCHEMES).expect("built-in label schemes are valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, AlgebraError> {
        let file: SchemeFile = toml::from_str(text).map_err(|e| AlgebraError::Scheme {
            name: "<file>".into(),
            reason: e.to_string(),
        })?;
        let mut schemes = BTreeMap::new();
        for entry in file.scheme {
            let bad = |reason: String| AlgebraError::Scheme {
                name: entry.name.clone(),
                reason,
            };
            let rules = entry
                .rules
                .iter()
                .map(|r| {
                    Ok(LabelRule {
                        label: r.label.clone(),
                        value: r.value.parse().map_err(bad)?,
                        confidence: r.confidence.parse().map_err(bad)?,
                    })
                })
                .collect::<Result<Vec<_>, AlgebraError>>()?;
            schemes.insert(entry.name.clone(), LabelScheme::new(entry.name, rules)?);
        }
        Ok(SchemeSet { schemes })
    }

    /// Add or replace schemes from another set.
    pub fn extend(&mut self, other: SchemeSet) {
        self.schemes.extend(other.schemes);
    }

    pub fn get(&self, name: &str) -> Option<&LabelScheme> {
        self.schemes.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.schemes.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(v: f64, c: f64, scheme: &str) -> String {
        let set = SchemeSet::builtin();
        map_to_label(&Rating::new(v, c).unwrap(), set.get(scheme).unwrap()).to_string()
    }

    #[test]
    fn interval_parsing() {
        let i: Interval = "[0.25, 0.5)".parse().unwrap();
        assert!(i.contains(0.25) && !i.contains(0.5));
        let j: Interval = "(0.7, 1]".parse().unwrap();
        assert!(!j.contains(0.7) && j.contains(1.0));
        assert!("0.2, 0.3".parse::<Interval>().is_err());
        assert!("[0.5, 0.2]".parse::<Interval>().is_err());
        assert_eq!(i.to_string(), "[0.25, 0.5)");
    }

    #[test]
    fn documented_examples() {
        assert_eq!(label(0.6, 0.9, "coinform250"), "credible");
        assert_eq!(label(-0.9, 0.5, "coinform250"), "not verifiable");
        assert_eq!(label(0.75, 1.0, "clef18"), "TRUE");
        assert_eq!(label(-0.75, 0.0, "clef18"), "FALSE");
        assert_eq!(label(0.7499, 1.0, "clef18"), "HALF-TRUE");
        assert_eq!(label(-0.01, 0.2, "fakenewsnet"), "fake");
        assert_eq!(label(0.0, 0.2, "fakenewsnet"), "real");
    }

    #[test]
    fn gaps_are_rejected() {
        let toml = r#"
            [[scheme]]
            name = "gappy"
            rules = [
              { label = "a", value = "[-1, 0)", confidence = "[0, 1]" },
              { label = "b", value = "(0, 1]", confidence = "[0, 1]" },
            ]
        "#;
        let err = SchemeSet::from_toml(toml).unwrap_err().to_string();
        assert!(err.contains("ratingValue 0"), "{err}");
        let conf_gap = r#"
            [[scheme]]
            name = "c"
            rules = [ { label = "a", value = "[-1, 1]", confidence = "(0, 1]" } ]
        "#;
        assert!(SchemeSet::from_toml(conf_gap).is_err());
    }

    #[test]
    fn custom_scheme_from_config() {
        let toml = r#"
            [[scheme]]
            name = "sign"
            rules = [
              { label = "neg", value = "[-1, 0)", confidence = "[0, 1]" },
              { label = "nonneg", value = "[-1, 1]", confidence = "[0, 1]" },
            ]
        "#;
        let set = SchemeSet::from_toml(toml).unwrap();
        let s = set.get("sign").unwrap();
        assert_eq!(s.labels(), vec!["neg", "nonneg"]);
        assert_eq!(map_to_label(&Rating::new(-0.5, 0.0).unwrap(), s), "neg");
    }
}
