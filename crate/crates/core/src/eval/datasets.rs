//! Readers for the evaluation datasets.
//!
//! * `clef18`: the CheckThat! factuality TSV files. Each row is
//!   `line<TAB>[speaker<TAB>]text<TAB>label`; rows whose label is `-` or
//!   empty are non-claims and are skipped. A directory is read file by file
//!   in name order.
//! * `fakenewsnet`: a directory tree where each article is a JSON file with
//!   `url`, `title` and `text`, filed under a `fake` or `real` directory
//!   (`politifact/fake/<id>/news content.json` in the released crawl).
//! * `coinform250`: JSON lines, one tweet per line, with `id`, `text`,
//!   `label`, optional `url` and optional `links` (`[{url, title, text}]`)
//!   for articles the tweet points to.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use tracing::warn;
use walkdir::WalkDir;

use super::{io_err, Dataset, EvalError};
use crate::model::{DataItem, ItemDocument, ItemKind};

/// A dataset sample ready for review.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledItem {
    /// Identifier within the dataset, used in prediction files.
    pub id: String,
    pub doc: ItemDocument,
    pub gold: String,
    pub dataset: Dataset,
}

impl LabeledItem {
    pub fn item(&self) -> &DataItem {
        self.doc.root_item()
    }
}

/// Read every usable sample of `dataset` under `path`.
pub fn load_dataset(dataset: Dataset, path: &Path) -> Result<Vec<LabeledItem>, EvalError> {
    fs::metadata(path).map_err(io_err(path))?;
    let items = match dataset {
        Dataset::Clef18 => load_clef18(path)?,
        Dataset::FakeNewsNet => load_fakenewsnet(path)?,
        Dataset::Coinform250 => load_coinform(path)?,
    };
    if items.is_empty() {
        return Err(EvalError::Empty(path.to_path_buf()));
    }
    Ok(items)
}

fn files_in(path: &Path, keep: impl Fn(&Path) -> bool) -> Result<Vec<PathBuf>, EvalError> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(path).sort_by_file_name() {
        let entry = entry.map_err(|e| EvalError::Io {
            path: e.path().map(Path::to_path_buf).unwrap_or_else(|| path.to_path_buf()),
            source: e.into_io_error().unwrap_or_else(|| std::io::Error::other("directory loop")),
        })?;
        if entry.file_type().is_file() && keep(entry.path()) {
            files.push(entry.into_path());
        }
    }
    Ok(files)
}

fn has_ext(p: &Path, exts: &[&str]) -> bool {
    p.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| exts.iter().any(|x| e.eq_ignore_ascii_case(x)))
}

fn load_clef18(path: &Path) -> Result<Vec<LabeledItem>, EvalError> {
    let mut out = Vec::new();
    for file in files_in(path, |p| has_ext(p, &["tsv", "txt"]))? {
        let text = fs::read_to_string(&file).map_err(io_err(&file))?;
        let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or("clef18");
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() < 3 {
                warn!(file = %file.display(), line = n + 1, "skipping row with {} columns", cols.len());
                continue;
            }
            let label = cols[cols.len() - 1];
            let claim = cols[cols.len() - 2];
            if label.is_empty() || label == "-" || label.eq_ignore_ascii_case("label") {
                continue;
            }
            let Some(gold) = Dataset::Clef18.canonical_label(label) else {
                warn!(file = %file.display(), line = n + 1, label, "skipping row with unknown label");
                continue;
            };
            match DataItem::sentence(claim) {
                Ok(item) => out.push(LabeledItem {
                    id: format!("{stem}:{}", cols[0]),
                    doc: ItemDocument::single(item),
                    gold: gold.to_string(),
                    dataset: Dataset::Clef18,
                }),
                Err(e) => warn!(file = %file.display(), line = n + 1, "skipping row: {e}"),
            }
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
struct ArticleRecord {
    #[serde(default)]
    url: String,
    #[serde(default)]
    title: String,
    #[serde(default)]
    text: String,
}

fn article(rec: ArticleRecord) -> Option<DataItem> {
    if rec.title.trim().is_empty() && rec.text.trim().is_empty() {
        return None;
    }
    DataItem::new(ItemKind::Article {
        url: rec.url,
        title: rec.title,
        body_text: rec.text,
        website: None,
    })
    .ok()
}

fn load_fakenewsnet(root: &Path) -> Result<Vec<LabeledItem>, EvalError> {
    let mut out = Vec::new();
    for file in files_in(root, |p| has_ext(p, &["json"]))? {
        let rel = file.strip_prefix(root).unwrap_or(&file);
        let gold = rel
            .components()
            .filter_map(|c| c.as_os_str().to_str())
            .find_map(|c| Dataset::FakeNewsNet.canonical_label(c));
        let Some(gold) = gold else {
            warn!(file = %file.display(), "skipping article outside a fake/ or real/ directory");
            continue;
        };
        let id_path = if file.file_name().and_then(|n| n.to_str()) == Some("news content.json") {
            rel.parent().unwrap_or(rel).to_path_buf()
        } else {
            rel.with_extension("")
        };
        let id = id_path
            .components()
            .filter_map(|c| c.as_os_str().to_str())
            .collect::<Vec<_>>()
            .join("/");
        let text = fs::read_to_string(&file).map_err(io_err(&file))?;
        let rec: ArticleRecord = match serde_json::from_str(&text) {
            Ok(r) => r,
            Err(e) => {
                warn!(file = %file.display(), "skipping unreadable article: {e}");
                continue;
            }
        };
        match article(rec) {
            Some(item) => out.push(LabeledItem {
                id,
                doc: ItemDocument::single(item),
                gold: gold.to_string(),
                dataset: Dataset::FakeNewsNet,
            }),
            None => warn!(file = %file.display(), "skipping article without content"),
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
struct TweetRecord {
    #[serde(alias = "tweet_id")]
    id: serde_json::Value,
    #[serde(alias = "full_text")]
    text: String,
    label: String,
    #[serde(default)]
    url: Option<String>,
    #[serde(default)]
    links: Vec<ArticleRecord>,
}

fn tweet_doc(rec: TweetRecord) -> Result<(String, ItemDocument, &'static str), String> {
    let id = match &rec.id {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        other => return Err(format!("bad id {other}")),
    };
    let gold = Dataset::Coinform250
        .canonical_label(&rec.label)
        .ok_or_else(|| format!("unknown label {:?}", rec.label))?;
    let mut items = BTreeMap::new();
    let mut linked = Vec::new();
    for link in rec.links {
        if let Some(a) = article(link) {
            linked.push(a.id().clone());
            items.insert(a.id().clone(), a);
        }
    }
    let url = rec.url.unwrap_or_else(|| format!("https://twitter.com/i/status/{id}"));
    let post = DataItem::new(ItemKind::SocialMediaPost {
        url,
        text: rec.text,
        linked_items: linked,
        website: None,
    })
    .map_err(|e| e.to_string())?;
    let root = post.id().clone();
    items.insert(root.clone(), post);
    Ok((id, ItemDocument { root, items }, gold))
}

fn load_coinform(path: &Path) -> Result<Vec<LabeledItem>, EvalError> {
    let mut out = Vec::new();
    for file in files_in(path, |p| has_ext(p, &["jsonl", "json"]))? {
        let text = fs::read_to_string(&file).map_err(io_err(&file))?;
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed = serde_json::from_str::<TweetRecord>(line)
                .map_err(|e| e.to_string())
                .and_then(tweet_doc);
            match parsed {
                Ok((id, doc, gold)) => out.push(LabeledItem {
                    id,
                    doc,
                    gold: gold.to_string(),
                    dataset: Dataset::Coinform250,
                }),
                Err(e) => warn!(file = %file.display(), line = n + 1, "skipping tweet: {e}"),
            }
        }
    }
    Ok(out)
}
