//! Scores over a completed prediction set.

use std::fmt::Write as _;

use serde::Serialize;

use super::{Dataset, EvalError, Prediction};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub dataset: String,
    /// Label order of the confusion matrix.
    pub labels: Vec<String>,
    /// Rows are gold labels, columns predicted labels.
    pub confusion: Vec<Vec<usize>>,
    /// Scored predictions; `error` rows are excluded.
    pub n: usize,
    pub errors: usize,
    pub mae: f64,
    pub macro_mae: f64,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub macro_avg_recall: f64,
}

impl MetricsReport {
    /// Recall of each gold class, `None` when the class has no gold samples.
    pub fn recalls(&self) -> Vec<Option<f64>> {
        self.confusion
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let total: usize = row.iter().sum();
                (total > 0).then(|| row[i] as f64 / total as f64)
            })
            .collect()
    }
}

fn label_index(dataset: Dataset, label: &str) -> Result<usize, EvalError> {
    dataset
        .canonical_label(label)
        .and_then(|l| dataset.ordinal(l))
        .ok_or_else(|| EvalError::UnknownLabel {
            label: label.to_string(),
            dataset,
        })
}

/// MAE uses the distance between label positions in [`Dataset::labels`]
/// (for clef18: TRUE=0, HALF-TRUE=1, FALSE=2). Macro MAE averages the
/// per-class MAE over gold classes that occur. Macro F1 and macro average
/// recall average over every class that occurs as gold or as prediction,
/// scoring undefined precision or recall as 0.
pub fn compute_metrics(predictions: &[Prediction], dataset: Dataset) -> Result<MetricsReport, EvalError> {
    let k = dataset.labels().len();
    let mut confusion = vec![vec![0usize; k]; k];
    let mut errors = 0;
    for p in predictions {
        let g = label_index(dataset, &p.gold)?;
        if p.is_error() {
            errors += 1;
            continue;
        }
        confusion[g][label_index(dataset, &p.predicted)?] += 1;
    }
    let n: usize = confusion.iter().flatten().sum();
    if n == 0 {
        return Err(EvalError::NoPredictions);
    }

    let gold_count: Vec<usize> = confusion.iter().map(|r| r.iter().sum()).collect();
    let pred_count: Vec<usize> = (0..k).map(|j| confusion.iter().map(|r| r[j]).sum()).collect();

    let mut abs_err = 0usize;
    let mut class_mae = Vec::new();
    for (g, row) in confusion.iter().enumerate() {
        let e: usize = row.iter().enumerate().map(|(p, c)| c * g.abs_diff(p)).sum();
        abs_err += e;
        if gold_count[g] > 0 {
            class_mae.push(e as f64 / gold_count[g] as f64);
        }
    }

    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let present: Vec<usize> = (0..k).filter(|&i| gold_count[i] + pred_count[i] > 0).collect();
    let mut f1_sum = 0.0;
    let mut recall_sum = 0.0;
    for &i in &present {
        let tp = confusion[i][i];
        let precision = ratio(tp, pred_count[i]);
        let recall = ratio(tp, gold_count[i]);
        recall_sum += recall;
        if precision + recall > 0.0 {
            f1_sum += 2.0 * precision * recall / (precision + recall);
        }
    }
    let trace: usize = (0..k).map(|i| confusion[i][i]).sum();

    Ok(MetricsReport {
        dataset: dataset.name().to_string(),
        labels: dataset.labels().iter().map(|s| s.to_string()).collect(),
        confusion,
        n,
        errors,
        mae: abs_err as f64 / n as f64,
        macro_mae: class_mae.iter().sum::<f64>() / class_mae.len() as f64,
        accuracy: trace as f64 / n as f64,
        macro_f1: f1_sum / present.len() as f64,
        macro_avg_recall: recall_sum / present.len() as f64,
    })
}

fn recall_cell(r: Option<f64>) -> String {
    r.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

/// Fixed-width confusion table with a recall row under it.
pub fn render_confusion(report: &MetricsReport) -> String {
    let corner = "gold \\ predicted";
    let first = report
        .labels
        .iter()
        .map(String::len)
        .chain([corner.len(), "recall".len()])
        .max()
        .unwrap_or(0);
    let widths: Vec<usize> = report.labels.iter().map(|l| l.len().max(6)).collect();

    let mut out = String::new();
    let _ = write!(out, "{corner:<first$}");
    for (l, w) in report.labels.iter().zip(&widths) {
        let _ = write!(out, "  {l:>w$}");
    }
    out.push('\n');
    for (label, row) in report.labels.iter().zip(&report.confusion) {
        let _ = write!(out, "{label:<first$}");
        for (c, w) in row.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
    }
    let _ = write!(out, "{:<first$}", "recall");
    for (r, w) in report.recalls().into_iter().zip(&widths) {
        let _ = write!(out, "  {:>w$}", recall_cell(r));
    }
    out.push('\n');
    out
}

/// The same table as CSV.
pub fn render_confusion_csv(report: &MetricsReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once("gold\\predicted")
        .chain(report.labels.iter().map(String::as_str))
        .collect();
    let mut rows = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for (label, row) in report.labels.iter().zip(&report.confusion) {
        rows.push(std::iter::once(label.clone()).chain(row.iter().map(usize::to_string)).collect());
    }
    rows.push(
        std::iter::once("recall".to_string())
            .chain(report.recalls().into_iter().map(recall_cell))
            .collect(),
    );
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preds(pairs: &[(&str, &str)]) -> Vec<Prediction> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, (g, p))| Prediction {
                item_id: i.to_string(),
                gold: g.to_string(),
                predicted: p.to_string(),
                value: None,
                confidence: None,
            })
            .collect()
    }

    /// Expand a confusion matrix (gold rows, predicted columns) into pairs.
    fn from_matrix(labels: &[&'static str], m: &[[usize; 3]; 3]) -> Vec<(&'static str, &'static str)> {
        let mut out = Vec::new();
        for (g, row) in m.iter().enumerate() {
            for (p, &c) in row.iter().enumerate() {
                out.extend(std::iter::repeat_n((labels[g], labels[p]), c));
            }
        }
        out
    }

    #[test]
    fn perfect_predictions() {
        let r = compute_metrics(&preds(&[("TRUE", "TRUE"), ("FALSE", "FALSE")]), Dataset::Clef18).unwrap();
        assert_eq!(r.mae, 0.0);
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.macro_f1, 1.0);
    }

    #[test]
    fn all_half_true() {
        let r = compute_metrics(&preds(&[("TRUE", "HALF-TRUE"), ("FALSE", "HALF-TRUE")]), Dataset::Clef18).unwrap();
        assert_eq!(r.mae, 1.0);
        assert_eq!(r.macro_mae, 1.0);
        assert_eq!(r.accuracy, 0.0);
    }

    #[test]
    fn hand_computed_three_by_three() {
        // gold \ pred   T  H  F
        //   T           3  1  1
        //   H           2  2  0
        //   F           1  1  4
        let m = [[3, 1, 1], [2, 2, 0], [1, 1, 4]];
        let pairs = from_matrix(Dataset::Clef18.labels(), &m);
        let r = compute_metrics(&preds(&pairs), Dataset::Clef18).unwrap();
        assert_eq!(r.confusion, m.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
        assert_eq!(r.n, 15);
        // abs errors: T row 1*1 + 1*2 = 3, H row 2*1 = 2, F row 1*2 + 1*1 = 3
        assert!((r.mae - 8.0 / 15.0).abs() < 1e-12);
        assert!((r.macro_mae - (3.0 / 5.0 + 2.0 / 4.0 + 3.0 / 6.0) / 3.0).abs() < 1e-12);
        assert!((r.accuracy - 9.0 / 15.0).abs() < 1e-12);
        // precision T 3/6, H 2/4, F 4/5; recall T 3/5, H 2/4, F 4/6
        let f1 = |p: f64, r: f64| 2.0 * p * r / (p + r);
        let want_f1 = (f1(0.5, 0.6) + f1(0.5, 0.5) + f1(0.8, 4.0 / 6.0)) / 3.0;
        assert!((r.macro_f1 - want_f1).abs() < 1e-12);
        assert!((r.macro_avg_recall - (0.6 + 0.5 + 4.0 / 6.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn errors_are_counted_not_scored() {
        let r = compute_metrics(&preds(&[("TRUE", "TRUE"), ("FALSE", "error")]), Dataset::Clef18).unwrap();
        assert_eq!((r.n, r.errors), (1, 1));
        assert!(compute_metrics(&preds(&[("TRUE", "error")]), Dataset::Clef18).is_err());
    }

    #[test]
    fn unknown_label_is_rejected() {
        let err = compute_metrics(&preds(&[("TRUE", "pants on fire")]), Dataset::Clef18).unwrap_err();
        assert!(matches!(err, EvalError::UnknownLabel { .. }));
        assert!(compute_metrics(&preds(&[("fake", "real")]), Dataset::Clef18).is_err());
    }

    #[test]
    fn identity_rendering() {
        let r = compute_metrics(&preds(&[("fake", "fake"), ("real", "real")]), Dataset::FakeNewsNet).unwrap();
        let text = render_confusion(&r);
        let want = "\
gold \\ predicted    fake    real
fake                   1       0
real                   0       1
recall             1.000   1.000
";
        assert_eq!(text, want);
    }

    #[test]
    fn golden_rendering() {
        let m = [[3, 1, 1], [2, 2, 0], [1, 1, 4]];
        let mut pairs = from_matrix(Dataset::Clef18.labels(), &m);
        pairs.reverse();
        let r = compute_metrics(&preds(&pairs), Dataset::Clef18).unwrap();
        let want = "\
gold \\ predicted    TRUE  HALF-TRUE   FALSE
TRUE                   3          1       1
HALF-TRUE              2          2       0
FALSE                  1          1       4
recall             0.600      0.500   0.667
";
        assert_eq!(render_confusion(&r), want);
        let csv = "\
gold\\predicted,TRUE,HALF-TRUE,FALSE
TRUE,3,1,1
HALF-TRUE,2,2,0
FALSE,1,1,4
recall,0.600,0.500,0.667
";
        assert_eq!(render_confusion_csv(&r), csv);
    }

    #[test]
    fn empty_class_recall_is_na() {
        let r = compute_metrics(&preds(&[("TRUE", "TRUE"), ("FALSE", "TRUE")]), Dataset::Clef18).unwrap();
        let last = render_confusion(&r).lines().last().unwrap().to_string();
        assert_eq!(last, "recall             1.000        n/a   0.000");
    }
}
