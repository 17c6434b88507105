//! File ingestion for the three signal kinds.
//!
//! Formats, one record per line unless noted:
//!
//! * claims (JSONL): a flat [`ClaimReviewRecord`] or a schema.org
//!   `ClaimReview` with a nested `reviewRating` object.
//! * sentences (JSONL): `{"text", "url", "date"}`.
//! * sites (JSONL or CSV with a header row):
//!   `domain, rater, value, confidence, review_url`.
//!
//! Malformed records are logged and counted, never fatal.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{io_err, SignalStore, StoreError};
use crate::model::{GroundSignal, Rating};
use crate::normalize::{claimreview_to_signal_with, default_rules, ClaimReviewRecord};

/// Sentences shorter than this many tokens are rejected.
pub const MIN_SENTENCE_TOKENS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct IngestReport {
    /// Well-formed records, including ones already present.
    pub accepted: usize,
    pub rejected: usize,
    /// Records that were not in the store before.
    pub added: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceRecord {
    #[serde(alias = "sentence")]
    pub text: String,
    #[serde(alias = "source_url")]
    pub url: String,
    #[serde(default, alias = "crawl_date")]
    pub date: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub domain: String,
    #[serde(alias = "rater_name")]
    pub rater: String,
    pub value: f64,
    pub confidence: f64,
    #[serde(default, alias = "url")]
    pub review_url: String,
}

fn lines(path: &Path) -> Result<impl Iterator<Item = (usize, Result<String, StoreError>)> + '_, StoreError> {
    let file = File::open(path).map_err(io_err(path))?;
    Ok(BufReader::new(file)
        .lines()
        .enumerate()
        .map(move |(n, l)| (n + 1, l.map_err(io_err(path))))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty())))
}

/// Lift a schema.org `ClaimReview` into the flat record shape.
fn flatten_claimreview(mut v: Value) -> Value {
    let Some(obj) = v.as_object_mut() else { return v };
    if let Some(Value::Object(rr)) = obj.remove("reviewRating") {
        for (k, val) in rr {
            if k != "@type" {
                obj.entry(k).or_insert(val);
            }
        }
    }
    if let Some(Value::String(name)) = obj.get("author") {
        let author = Value::Object(Map::from_iter([("name".to_string(), Value::String(name.clone()))]));
        obj.insert("author".into(), author);
    }
    for key in ["ratingValue", "bestRating", "worstRating", "rating_value", "best_rating", "worst_rating"] {
        if let Some(Value::String(s)) = obj.get(key) {
            let parsed = s.trim().parse::<f64>().ok().and_then(serde_json::Number::from_f64);
            obj.insert(key.into(), parsed.map_or(Value::Null, Value::Number));
        }
    }
    obj.remove("@type");
    obj.remove("@context");
    v
}

fn parse_claim(line: &str) -> Result<ClaimReviewRecord, String> {
    let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let record: ClaimReviewRecord = serde_json::from_value(flatten_claimreview(v)).map_err(|e| e.to_string())?;
    record.validate()?;
    Ok(record)
}

fn parse_sentence(line: &str) -> Result<GroundSignal, String> {
    let r: SentenceRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let tokens = r.text.split_whitespace().count();
    if tokens < MIN_SENTENCE_TOKENS {
        return Err(format!("sentence has {tokens} tokens, need {MIN_SENTENCE_TOKENS}"));
    }
    GroundSignal::precrawled(r.text, r.url, r.date).map_err(|e| e.to_string())
}

fn site_signal(r: SiteRecord) -> Result<GroundSignal, String> {
    let rating = Rating::new(r.value, r.confidence).map_err(|e| e.to_string())?;
    if r.rater.trim().is_empty() {
        return Err("rater is empty".into());
    }
    GroundSignal::website_reputation(&r.domain, r.rater, rating, r.review_url).map_err(|e| e.to_string())
}

impl SignalStore {
    fn ingest_with(
        &mut self,
        path: &Path,
        parse: impl Fn(&str) -> Result<GroundSignal, String>,
    ) -> Result<IngestReport, StoreError> {
        let mut report = IngestReport::default();
        let mut batch = Vec::new();
        for (n, line) in lines(path)? {
            match parse(&line?) {
                Ok(signal) => {
                    report.accepted += 1;
                    batch.push(signal);
                }
                Err(reason) => {
                    tracing::warn!(path = %path.display(), line = n, %reason, "rejected record");
                    report.rejected += 1;
                }
            }
        }
        report.added = self.insert_all(batch)?;
        Ok(report)
    }

    /// Ingest fact-checks, normalizing verdicts with the shipped rule table.
    pub fn ingest_claimreviews(&mut self, path: impl AsRef<Path>) -> Result<IngestReport, StoreError> {
        let rules = default_rules();
        self.ingest_with(path.as_ref(), |line| {
            parse_claim(line).map(|r| claimreview_to_signal_with(r, rules))
        })
    }

    pub fn ingest_precrawled(&mut self, path: impl AsRef<Path>) -> Result<IngestReport, StoreError> {
        self.ingest_with(path.as_ref(), parse_sentence)
    }

    /// Ingest website reputation records; `.csv` files are read as CSV.
    pub fn ingest_sites(&mut self, path: impl AsRef<Path>) -> Result<IngestReport, StoreError> {
        let path = path.as_ref();
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if !is_csv {
            return self.ingest_with(path, |line| {
                serde_json::from_str::<SiteRecord>(line).map_err(|e| e.to_string()).and_then(site_signal)
            });
        }
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| StoreError::Io {
                path: path.to_path_buf(),
                source: std::io::Error::other(e),
            })?;
        let mut report = IngestReport::default();
        let mut batch = Vec::new();
        for (n, row) in reader.deserialize::<SiteRecord>().enumerate() {
            match row.map_err(|e| e.to_string()).and_then(site_signal) {
                Ok(s) => {
                    report.accepted += 1;
                    batch.push(s);
                }
                Err(reason) => {
                    tracing::warn!(path = %path.display(), row = n + 1, %reason, "rejected record");
                    report.rejected += 1;
                }
            }
        }
        report.added = self.insert_all(batch)?;
        Ok(report)
    }
}
