//! Review every sample, map ratings to labels, persist graphs and predictions.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tracing::{info, warn};

use super::{io_err, EvalError, LabeledItem};
use crate::algebra::{map_to_label, LabelScheme};
use crate::bots::Engine;
use crate::model::{parse_jsonld, serialize_jsonld, ItemDocument, ReviewGraph};
use crate::par::{self, ExecMode};

/// Predicted label recorded for samples whose review failed.
pub const ERROR_LABEL: &str = "error";

pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const GRAPHS_DIR: &str = "graphs";

/// Anything that turns a request document into a review graph.
pub trait ItemReviewer: Sync {
    fn review_item(&self, doc: &ItemDocument) -> Result<ReviewGraph, String>;
}

impl ItemReviewer for Engine {
    fn review_item(&self, doc: &ItemDocument) -> Result<ReviewGraph, String> {
        self.review_document(doc).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub item_id: String,
    pub gold: String,
    pub predicted: String,
    pub value: Option<f64>,
    pub confidence: Option<f64>,
}

impl Prediction {
    pub fn is_error(&self) -> bool {
        self.predicted == ERROR_LABEL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub predictions: Vec<Prediction>,
    /// Samples reviewed in this run.
    pub reviewed: usize,
    /// Samples whose graph was already on disk.
    pub resumed: usize,
    pub errors: usize,
    pub predictions_path: PathBuf,
}

fn graph_file(dir: &Path, id: &str) -> PathBuf {
    let safe: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .take(60)
        .collect();
    let digest = hex::encode(&Sha256::digest(id.as_bytes())[..4]);
    dir.join(format!("{safe}-{digest}.jsonld"))
}

enum Outcome {
    Reviewed(Prediction),
    Resumed(Prediction),
    Failed(Prediction),
}

fn predict(item: &LabeledItem, graph: &ReviewGraph, scheme: &LabelScheme) -> Result<Prediction, String> {
    let review = graph.root_review().ok_or("graph has no root review")?;
    let rating = review.rating();
    Ok(Prediction {
        item_id: item.id.clone(),
        gold: item.gold.clone(),
        predicted: map_to_label(&rating, scheme).to_string(),
        value: Some(rating.value()),
        confidence: Some(rating.confidence()),
    })
}

fn process(item: &LabeledItem, reviewer: &dyn ItemReviewer, scheme: &LabelScheme, dir: &Path) -> Outcome {
    let path = graph_file(dir, &item.id);
    if let Ok(text) = fs::read_to_string(&path) {
        match parse_jsonld(&text).map_err(|e| e.to_string()).and_then(|g| predict(item, &g, scheme)) {
            Ok(p) => return Outcome::Resumed(p),
            Err(e) => warn!(item = %item.id, "stored graph unusable, reviewing again: {e}"),
        }
    }
    let result = reviewer.review_item(&item.doc).and_then(|graph| {
        let text = serialize_jsonld(&graph).map_err(|e| e.to_string())?;
        let tmp = path.with_extension("jsonld.tmp");
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, &path))
            .map_err(|e| format!("{}: {e}", path.display()))?;
        predict(item, &graph, scheme)
    });
    match result {
        Ok(p) => Outcome::Reviewed(p),
        Err(e) => {
            warn!(item = %item.id, "review failed: {e}");
            Outcome::Failed(Prediction {
                item_id: item.id.clone(),
                gold: item.gold.clone(),
                predicted: ERROR_LABEL.to_string(),
                value: None,
                confidence: None,
            })
        }
    }
}

/// Review `items`, writing one JSON-LD graph per sample under
/// `out_dir/graphs` and all predictions to `out_dir/predictions.csv`.
///
/// Samples whose graph already exists are not reviewed again, so an
/// interrupted run can be restarted over the same directory. Failed samples
/// get an `error` prediction and no graph, and are retried on the next run.
pub fn run_pipeline(
    items: &[LabeledItem],
    reviewer: &dyn ItemReviewer,
    scheme: &LabelScheme,
    out_dir: &Path,
    mode: ExecMode,
) -> Result<RunSummary, EvalError> {
    let graphs = out_dir.join(GRAPHS_DIR);
    fs::create_dir_all(&graphs).map_err(io_err(&graphs))?;
    let outcomes = par::map(mode, items, |item| process(item, reviewer, scheme, &graphs));

    let (mut reviewed, mut resumed, mut errors) = (0, 0, 0);
    let predictions: Vec<Prediction> = outcomes
        .into_iter()
        .map(|o| match o {
            Outcome::Reviewed(p) => {
                reviewed += 1;
                p
            }
            Outcome::Resumed(p) => {
                resumed += 1;
                p
            }
            Outcome::Failed(p) => {
                errors += 1;
                p
            }
        })
        .collect();

    let predictions_path = out_dir.join(PREDICTIONS_FILE);
    write_predictions(&predictions_path, &predictions)?;
    info!(reviewed, resumed, errors, "evaluation run finished");
    Ok(RunSummary {
        predictions,
        reviewed,
        resumed,
        errors,
        predictions_path,
    })
}

fn write_predictions(path: &Path, predictions: &[Prediction]) -> Result<(), EvalError> {
    let format = |e: csv::Error| EvalError::Format {
        path: path.to_path_buf(),
        reason: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(format)?;
    for p in predictions {
        w.serialize(p).map_err(format)?;
    }
    w.flush().map_err(io_err(path))
}

/// Read a predictions file written by [`run_pipeline`].
pub fn read_predictions(path: &Path) -> Result<Vec<Prediction>, EvalError> {
    let format = |e: csv::Error| EvalError::Format {
        path: path.to_path_buf(),
        reason: e.to_string(),
    };
    fs::metadata(path).map_err(io_err(path))?;
    let mut r = csv::Reader::from_path(path).map_err(format)?;
    r.deserialize().collect::<Result<Vec<Prediction>, _>>().map_err(format)
}

#[cfg(test)]
mod tests {
    use std::sync::atomic::{AtomicUsize, Ordering};

    use super::*;
    use crate::algebra::SchemeSet;
    use crate::eval::Dataset;
    use crate::model::{BotDescriptor, CredibilityReview, DataItem, Node, Rating, ReviewDraft};

    struct Fixed {
        calls: AtomicUsize,
    }

    impl ItemReviewer for Fixed {
        fn review_item(&self, doc: &ItemDocument) -> Result<ReviewGraph, String> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            let item = doc.root_item();
            if item.text() == Some("timeout") {
                return Err("backend unavailable: timed out".into());
            }
            let value = if item.text().unwrap().contains("false") { -0.9 } else { 0.9 };
            let bot = BotDescriptor::new("TestBot", "1", vec![]);
            let author = bot.id().clone();
            let created = chrono::DateTime::UNIX_EPOCH;
            let review: CredibilityReview =
                ReviewDraft::new(item.id().clone(), Rating::new(value, 0.9).unwrap(), author, created)
                    .build()
                    .unwrap();
            let root = review.id().clone();
            Ok(ReviewGraph::new(root, [Node::Review(review), Node::Item(item.clone()), Node::Bot(bot)]))
        }
    }

    fn sample(id: &str, text: &str, gold: &str) -> LabeledItem {
        LabeledItem {
            id: id.into(),
            doc: ItemDocument::single(DataItem::sentence(text).unwrap()),
            gold: gold.into(),
            dataset: Dataset::Clef18,
        }
    }

    #[test]
    fn writes_graphs_and_predictions_then_resumes() {
        let scheme = SchemeSet::builtin().get("clef18").unwrap().clone();
        let items = vec![
            sample("d:1", "this is false", "FALSE"),
            sample("d:2", "this holds", "TRUE"),
            sample("d/3", "timeout", "HALF-TRUE"),
        ];
        let dir = tempfile::tempdir().unwrap();
        let reviewer = Fixed { calls: AtomicUsize::new(0) };
        let run = run_pipeline(&items, &reviewer, &scheme, dir.path(), ExecMode::Parallel).unwrap();
        assert_eq!((run.reviewed, run.resumed, run.errors), (2, 0, 1));
        assert_eq!(fs::read_dir(dir.path().join(GRAPHS_DIR)).unwrap().count(), 2);

        let preds = read_predictions(&run.predictions_path).unwrap();
        assert_eq!(preds.len(), 3);
        assert_eq!(preds[0].predicted, "FALSE");
        assert_eq!(preds[1].predicted, "TRUE");
        assert_eq!(preds[1].value, Some(0.9));
        assert!(preds[2].is_error());
        assert_eq!(preds[2].value, None);

        let again = run_pipeline(&items, &reviewer, &scheme, dir.path(), ExecMode::Sequential).unwrap();
        assert_eq!((again.reviewed, again.resumed, again.errors), (0, 2, 1));
        assert_eq!(reviewer.calls.load(Ordering::SeqCst), 4);
        assert_eq!(again.predictions, run.predictions);
    }

    #[test]
    fn graph_file_names_are_distinct() {
        let d = Path::new("/x");
        assert_ne!(graph_file(d, "a/b"), graph_file(d, "a_b"));
        assert!(graph_file(d, "a/b").to_str().unwrap().ends_with(".jsonld"));
    }
}
