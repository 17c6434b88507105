//! Evaluation: dataset readers, the prediction pipeline, metrics.

mod datasets;
mod metrics;
mod pipeline;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

pub use datasets::{load_dataset, LabeledItem};
pub use metrics::{compute_metrics, render_confusion, render_confusion_csv, MetricsReport};
pub use pipeline::{read_predictions, run_pipeline, ItemReviewer, Prediction, RunSummary, ERROR_LABEL};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },
    #[error("no usable items in {0}")]
    Empty(PathBuf),
    #[error("label {label:?} is not a {dataset} label")]
    UnknownLabel { label: String, dataset: Dataset },
    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),
    #[error("no predictions to score")]
    NoPredictions,
}

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> EvalError + '_ {
    move |source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dataset {
    Clef18,
    FakeNewsNet,
    Coinform250,
}

impl Dataset {
    pub const ALL: [Dataset; 3] = [Dataset::Clef18, Dataset::FakeNewsNet, Dataset::Coinform250];

    pub fn name(self) -> &'static str {
        match self {
            Dataset::Clef18 => "clef18",
            Dataset::FakeNewsNet => "fakenewsnet",
            Dataset::Coinform250 => "coinform250",
        }
    }

    /// Labels in ordinal order; confusion matrices use this order.
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Dataset::Clef18 => &["TRUE", "HALF-TRUE", "FALSE"],
            Dataset::FakeNewsNet => &["fake", "real"],
            Dataset::Coinform250 => &[
                "credible",
                "mostly credible",
                "uncertain",
                "mostly not credible",
                "not credible",
                "not verifiable",
            ],
        }
    }

    /// Canonical spelling of `label`, matched case-insensitively.
    pub fn canonical_label(self, label: &str) -> Option<&'static str> {
        let l = label.trim();
        self.labels().iter().copied().find(|c| c.eq_ignore_ascii_case(l))
    }

    /// Ordinal position used for MAE.
    pub fn ordinal(self, label: &str) -> Option<usize> {
        self.labels().iter().position(|c| *c == label)
    }

    /// The label scheme with the same name.
    pub fn default_scheme(self) -> &'static str {
        self.name()
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dataset {
    type Err = EvalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| EvalError::UnknownDataset(s.to_string()))
    }
}
