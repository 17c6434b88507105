//! Ground-signal storage: fact-checks, website reputation records and
//! pre-crawled sentences.
//!
//! A store is a directory holding one append-only log, `signals.jsonl`, with
//! one JSON-LD signal node per line. Opening a store replays the log into
//! in-memory lookup tables. Signal ids are content addressed, so re-ingesting
//! the same records leaves the store unchanged.
//!
//! Ingestion takes `&mut self` and lookups take `&self`: share a finished
//! store behind an `Arc` for concurrent readers.

mod ingest;

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub use ingest::{IngestReport, SentenceRecord, SiteRecord};

use crate::model::{jsonld, normalize_domain, GroundSignal, ModelError, Node, NodeId, SignalKind};

pub const LOG_FILE: &str = "signals.jsonl";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {reason}")]
    Corrupt { path: PathBuf, line: usize, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn site_key(domain: &str) -> &str {
    match domain.strip_prefix("www.") {
        Some(rest) if rest.contains('.') => rest,
        _ => domain,
    }
}

/// Lowercase, collapse whitespace, strip terminal punctuation.
pub fn normalize_text(text: &str) -> String {
    let lowered = text.to_lowercase();
    let collapsed = lowered.split_whitespace().collect::<Vec<_>>().join(" ");
    collapsed
        .trim_end_matches(|c: char| c.is_whitespace() || ".!?;:,…".contains(c))
        .to_string()
}

/// Which kind of text an index entry holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TextKind {
    Claim,
    Sentence,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SignalStoreStats {
    pub fact_checks: usize,
    pub site_reputations: usize,
    pub precrawled_sentences: usize,
    /// Signal counts per fact-checker, rater or source domain.
    pub by_source: BTreeMap<String, usize>,
}

#[derive(Debug, Default)]
pub struct SignalStore {
    log: Option<PathBuf>,
    signals: BTreeMap<NodeId, GroundSignal>,
    claims: HashMap<String, Vec<NodeId>>,
    sites: HashMap<String, Vec<NodeId>>,
    sentences: HashMap<String, Vec<NodeId>>,
}

fn push_sorted(index: &mut HashMap<String, Vec<NodeId>>, key: String, id: &NodeId) {
    let ids = index.entry(key).or_default();
    if let Err(pos) = ids.binary_search(id) {
        ids.insert(pos, id.clone());
    }
}

impl SignalStore {
    /// A store that lives only in memory.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Open (creating if needed) the store in `dir` and replay its log.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let log = dir.join(LOG_FILE);
        let mut store = SignalStore {
            log: Some(log.clone()),
            ..Default::default()
        };
        if log.exists() {
            let reader = BufReader::new(File::open(&log).map_err(io_err(&log))?);
            for (n, line) in reader.lines().enumerate() {
                let line = line.map_err(io_err(&log))?;
                if line.trim().is_empty() {
                    continue;
                }
                let corrupt = |reason: String| StoreError::Corrupt {
                    path: log.clone(),
                    line: n + 1,
                    reason,
                };
                let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| corrupt(e.to_string()))?;
                match jsonld::node_from_value(&value).map_err(|e| corrupt(e.to_string()))? {
                    Node::Signal(s) => {
                        store.index(s);
                    }
                    other => return Err(corrupt(format!("expected a signal, found {}", other.type_name()))),
                }
            }
        }
        Ok(store)
    }

    /// Location of the backing log, if any.
    pub fn log_path(&self) -> Option<&Path> {
        self.log.as_deref()
    }

    fn index(&mut self, signal: GroundSignal) -> bool {
        if self.signals.contains_key(signal.id()) {
            return false;
        }
        let id = signal.id().clone();
        match signal.kind() {
            SignalKind::FactCheck { record, .. } => {
                push_sorted(&mut self.claims, normalize_text(&record.claim_text), &id)
            }
            SignalKind::WebSiteReputation { domain, .. } => push_sorted(&mut self.sites, site_key(domain).to_string(), &id),
            SignalKind::PrecrawledSentence { text, .. } => push_sorted(&mut self.sentences, normalize_text(text), &id),
        }
        self.signals.insert(id, signal);
        true
    }

    /// Add signals, appending new ones to the log. Returns how many were new.
    pub fn insert_all(&mut self, signals: impl IntoIterator<Item = GroundSignal>) -> Result<usize, StoreError> {
        let mut fresh = Vec::new();
        for s in signals {
            if !self.signals.contains_key(s.id()) {
                fresh.push(jsonld::node_to_value(&Node::Signal(s.clone())));
                self.index(s);
            }
        }
        if let (Some(log), false) = (&self.log, fresh.is_empty()) {
            let mut f = OpenOptions::new().create(true).append(true).open(log).map_err(io_err(log))?;
            let mut buf = String::new();
            for v in &fresh {
                buf.push_str(&v.to_string());
                buf.push('\n');
            }
            f.write_all(buf.as_bytes()).map_err(io_err(log))?;
            f.flush().map_err(io_err(log))?;
        }
        Ok(fresh.len())
    }

    pub fn insert(&mut self, signal: GroundSignal) -> Result<bool, StoreError> {
        Ok(self.insert_all([signal])? == 1)
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn get(&self, id: &NodeId) -> Option<&GroundSignal> {
        self.signals.get(id)
    }

    pub fn signals(&self) -> impl Iterator<Item = &GroundSignal> {
        self.signals.values()
    }

    fn resolve<'a>(&'a self, ids: Option<&'a Vec<NodeId>>) -> impl Iterator<Item = &'a GroundSignal> + 'a {
        ids.into_iter().flatten().filter_map(|id| self.signals.get(id))
    }

    /// Fact-checks whose claim text equals `text` after [`normalize_text`].
    pub fn lookup_claim(&self, text: &str) -> Vec<&GroundSignal> {
        self.resolve(self.claims.get(&normalize_text(text))).collect()
    }

    /// Pre-crawled occurrences of a sentence.
    pub fn lookup_precrawled(&self, text: &str) -> Vec<&GroundSignal> {
        self.resolve(self.sentences.get(&normalize_text(text))).collect()
    }

    /// Reputation records for `domain` and each parent domain with at least
    /// two labels (`news.example.com` also matches `example.com`). A leading
    /// `www.` is ignored on both sides.
    pub fn lookup_website(&self, domain: &str) -> Vec<&GroundSignal> {
        let Ok(domain) = normalize_domain(domain) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut current = site_key(&domain);
        loop {
            out.extend(self.resolve(self.sites.get(current)));
            match current.split_once('.') {
                Some((_, parent)) if parent.contains('.') => current = parent,
                _ => break,
            }
        }
        out
    }

    /// Texts to embed for similarity search: one entry per distinct
    /// normalized claim or sentence, represented by its smallest signal id.
    pub fn index_entries(&self) -> Vec<(NodeId, TextKind, String)> {
        let mut out = Vec::new();
        for (kind, table) in [(TextKind::Claim, &self.claims), (TextKind::Sentence, &self.sentences)] {
            for ids in table.values() {
                let Some(first) = ids.first().and_then(|id| self.signals.get(id)) else {
                    continue;
                };
                let text = match first.kind() {
                    SignalKind::FactCheck { record, .. } => record.claim_text.clone(),
                    SignalKind::PrecrawledSentence { text, .. } => text.clone(),
                    SignalKind::WebSiteReputation { .. } => continue,
                };
                out.push((first.id().clone(), kind, text));
            }
        }
        out.sort();
        out
    }

    pub fn stats(&self) -> SignalStoreStats {
        let mut stats = SignalStoreStats::default();
        for s in self.signals.values() {
            let source = match s.kind() {
                SignalKind::FactCheck { record, .. } => {
                    stats.fact_checks += 1;
                    format!("factcheck:{}", record.fact_checker.name)
                }
                SignalKind::WebSiteReputation { rater_name, .. } => {
                    stats.site_reputations += 1;
                    format!("rater:{rater_name}")
                }
                SignalKind::PrecrawledSentence { source_domain, .. } => {
                    stats.precrawled_sentences += 1;
                    format!("site:{source_domain}")
                }
            };
            *stats.by_source.entry(source).or_default() += 1;
        }
        stats
    }
}
