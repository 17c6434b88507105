//! Sentence encoders, stance detectors and a nearest-neighbour index.
//!
//! Two backends implement [`SentenceEncoder`] and [`StanceDetector`]:
//! the deterministic [`baseline`] (character n-gram hashing and a
//! token-overlap stance heuristic) and [`RemoteBackend`], an HTTP client for
//! a model server.

pub mod baseline;
mod index;
mod remote;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use baseline::{BaselineStance, HashingEncoder, BASELINE_BACKEND_ID, BASELINE_DIM};
pub use index::{IndexEntry, SentenceIndex, INDEX_MAGIC, INDEX_VERSION};
pub use remote::RemoteBackend;

use crate::algebra::StanceLabel;
use crate::model::NodeId;
use crate::store::TextKind;

#[derive(Debug, Error)]
pub enum NlpError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty sentence")]
    EmptyText,
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("backend error: {0}")]
    Backend(String),
    #[error("index: {0}")]
    Index(String),
    #[error("index backend mismatch: file built with {found:?}, expected {expected:?}")]
    BackendMismatch { expected: String, found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A unit-length embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceVector {
    values: Vec<f32>,
}

impl SentenceVector {
    /// L2-normalize `values`.
    pub fn from_raw(values: Vec<f32>) -> Result<Self, NlpError> {
        let norm = values.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(NlpError::ZeroVector);
        }
        Ok(SentenceVector {
            values: values.into_iter().map(|x| (x as f64 / norm) as f32).collect(),
        })
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        sq_norm(&self.values).sqrt()
    }
}

fn sq_norm(v: &[f32]) -> f64 {
    v.iter().map(|&x| (x as f64) * (x as f64)).sum()
}

fn dot(a: &[f32], b: &[f32]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| (x as f64) * (y as f64)).sum()
}

/// `(cos + 1) / 2` given precomputed squared norms.
pub(crate) fn similarity_raw(a: &[f32], na: f64, b: &[f32], nb: f64) -> f64 {
    let denom = (na * nb).sqrt();
    if denom == 0.0 {
        return 0.5;
    }
    let mut cos = dot(a, b) / denom;
    if cos > 1.0 - 1e-9 && a == b {
        cos = 1.0;
    }
    ((cos + 1.0) / 2.0).clamp(0.0, 1.0)
}

/// Cosine similarity mapped onto `[0, 1]`: 1 identical, 0.5 orthogonal, 0 antipodal.
pub fn similarity(a: &SentenceVector, b: &SentenceVector) -> Result<f64, NlpError> {
    if a.dim() != b.dim() {
        return Err(NlpError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(similarity_raw(&a.values, sq_norm(&a.values), &b.values, sq_norm(&b.values)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StanceJudgment {
    pub label: StanceLabel,
    pub score: f64,
}

/// A retrieved signal sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct Match {
    pub signal: NodeId,
    pub kind: TextKind,
    pub text: String,
    pub similarity: f64,
}

pub trait SentenceEncoder: Send + Sync {
    /// Identifies the model; stored in index files.
    fn backend_id(&self) -> &str;
    fn dim(&self) -> usize;
    fn encode_batch(&self, sentences: &[&str]) -> Result<Vec<SentenceVector>, NlpError>;

    fn encode(&self, sentence: &str) -> Result<SentenceVector, NlpError> {
        self.encode_batch(&[sentence])?
            .pop()
            .ok_or_else(|| NlpError::Backend("empty response".into()))
    }
}

pub trait StanceDetector: Send + Sync {
    fn stance_batch(&self, pairs: &[(&str, &str)]) -> Result<Vec<StanceJudgment>, NlpError>;

    fn stance(&self, source: &str, target: &str) -> Result<StanceJudgment, NlpError> {
        self.stance_batch(&[(source, target)])?
            .pop()
            .ok_or_else(|| NlpError::Backend("empty response".into()))
    }
}
