//! Exhaustive-scan nearest-neighbour index over encoded signal sentences.
//!
//! File layout (little endian):
//!
//! ```text
//! magic     8 bytes  "LCRVIDX\0"
//! version   u32
//! dim       u32
//! count     u64
//! backend   u32 length + UTF-8 bytes
//! entries   count times:
//!           kind u8 (0 claim, 1 sentence)
//!           id   u32 length + UTF-8 bytes
//!           text u32 length + UTF-8 bytes
//!           dim  f32 values
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{similarity_raw, sq_norm, Match, NlpError, SentenceEncoder, SentenceVector};
use crate::model::NodeId;
use crate::par::{self, ExecMode};
use crate::store::{SignalStore, TextKind};

pub const INDEX_MAGIC: &[u8; 8] = b"LCRVIDX\0";
pub const INDEX_VERSION: u32 = 1;

const ENCODE_BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct IndexEntry {
    pub id: NodeId,
    pub kind: TextKind,
    pub text: String,
}

/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceIndex {
    backend_id: String,
    dim: usize,
    entries: Vec<IndexEntry>,
    vectors: Vec<f32>,
    sq_norms: Vec<f64>,
}

impl SentenceIndex {
    pub fn empty(backend_id: impl Into<String>, dim: usize) -> Self {
        SentenceIndex {
            backend_id: backend_id.into(),
            dim,
            entries: Vec::new(),
            vectors: Vec::new(),
            sq_norms: Vec::new(),
        }
    }

    /// Assemble from pre-encoded vectors. Every vector must have `dim` values.
    pub fn from_vectors(
        backend_id: impl Into<String>,
        dim: usize,
        items: Vec<(IndexEntry, SentenceVector)>,
    ) -> Result<Self, NlpError> {
        let mut index = Self::empty(backend_id, dim);
        index.vectors.reserve(items.len() * dim);
        for (entry, v) in items {
            if v.dim() != dim {
                return Err(NlpError::DimensionMismatch { expected: dim, found: v.dim() });
            }
            index.push(entry, v.values());
        }
        Ok(index)
    }

    fn push(&mut self, entry: IndexEntry, values: &[f32]) {
        self.sq_norms.push(sq_norm(values));
        self.vectors.extend_from_slice(values);
        self.entries.push(entry);
    }

    /// Encode `entries` with `encoder`.
    pub fn build(encoder: &dyn SentenceEncoder, entries: Vec<IndexEntry>) -> Result<Self, NlpError> {
        let mut items = Vec::with_capacity(entries.len());
        for chunk in entries.chunks(ENCODE_BATCH) {
            let texts: Vec<&str> = chunk.iter().map(|e| e.text.as_str()).collect();
            let vectors = encoder.encode_batch(&texts)?;
            if vectors.len() != chunk.len() {
                return Err(NlpError::Backend(format!(
                    "encoder returned {} vectors for {} sentences",
                    vectors.len(),
                    chunk.len()
                )));
            }
            items.extend(chunk.iter().cloned().zip(vectors));
        }
        Self::from_vectors(encoder.backend_id(), encoder.dim(), items)
    }

    /// Encode every distinct claim and pre-crawled sentence in `store`.
    pub fn build_from_store(encoder: &dyn SentenceEncoder, store: &SignalStore) -> Result<Self, NlpError> {
        let entries = store
            .index_entries()
            .into_iter()
            .map(|(id, kind, text)| IndexEntry { id, kind, text })
            .collect();
        Self::build(encoder, entries)
    }

    pub fn backend_id(&self) -> &str {
        &self.backend_id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[IndexEntry] {
        &self.entries
    }

    pub fn vector(&self, i: usize) -> &[f32] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    /// Up to `k` entries with similarity at least `sim_floor`, by descending
    /// similarity then ascending id.
    pub fn nearest(
        &self,
        query: &SentenceVector,
        k: usize,
        sim_floor: f64,
        mode: ExecMode,
    ) -> Result<Vec<Match>, NlpError> {
        if query.dim() != self.dim {
            return Err(NlpError::DimensionMismatch { expected: self.dim, found: query.dim() });
        }
        if k == 0 {
            return Ok(Vec::new());
        }
        let q = query.values();
        let qn = sq_norm(q);
        let positions: Vec<usize> = (0..self.entries.len()).collect();
        let mut hits = par::filter_map(mode, &positions, |&i| {
            let s = similarity_raw(q, qn, self.vector(i), self.sq_norms[i]);
            (s >= sim_floor).then_some((i, s))
        });
        hits.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| self.entries[a.0].id.cmp(&self.entries[b.0].id)));
        hits.truncate(k);
        Ok(hits
            .into_iter()
            .map(|(i, s)| Match {
                signal: self.entries[i].id.clone(),
                kind: self.entries[i].kind,
                text: self.entries[i].text.clone(),
                similarity: s,
            })
            .collect())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), NlpError> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(INDEX_MAGIC)?;
        w.write_all(&INDEX_VERSION.to_le_bytes())?;
        w.write_all(&(self.dim as u32).to_le_bytes())?;
        w.write_all(&(self.entries.len() as u64).to_le_bytes())?;
        write_str(&mut w, &self.backend_id)?;
        for (i, e) in self.entries.iter().enumerate() {
            w.write_all(&[match e.kind {
                TextKind::Claim => 0,
                TextKind::Sentence => 1,
            }])?;
            write_str(&mut w, e.id.as_str())?;
            write_str(&mut w, &e.text)?;
            for x in self.vector(i) {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Read an index file. With `expected_backend`, refuse files built by
    /// another backend.
    pub fn load(path: impl AsRef<Path>, expected_backend: Option<&str>) -> Result<Self, NlpError> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != INDEX_MAGIC {
            return Err(NlpError::Index("not an index file".into()));
        }
        let version = read_u32(&mut r)?;
        if version != INDEX_VERSION {
            return Err(NlpError::Index(format!("unsupported version {version}")));
        }
        let dim = read_u32(&mut r)? as usize;
        let mut count = [0u8; 8];
        r.read_exact(&mut count)?;
        let count = u64::from_le_bytes(count) as usize;
        let backend_id = read_str(&mut r)?;
        if let Some(expected) = expected_backend {
            if expected != backend_id {
                return Err(NlpError::BackendMismatch {
                    expected: expected.into(),
                    found: backend_id,
                });
            }
        }
        let mut index = Self::empty(backend_id, dim);
        let mut values = vec![0f32; dim];
        let mut buf = [0u8; 4];
        for _ in 0..count {
            let mut kind = [0u8; 1];
            r.read_exact(&mut kind)?;
            let kind = match kind[0] {
                0 => TextKind::Claim,
                1 => TextKind::Sentence,
                other => return Err(NlpError::Index(format!("bad entry kind {other}"))),
            };
            let id = NodeId::new(read_str(&mut r)?);
            let text = read_str(&mut r)?;
            for x in values.iter_mut() {
                r.read_exact(&mut buf)?;
                *x = f32::from_le_bytes(buf);
            }
            index.push(IndexEntry { id, kind, text }, &values);
        }
        if r.read(&mut buf)? != 0 {
            return Err(NlpError::Index("trailing bytes".into()));
        }
        Ok(index)
    }
}

fn write_str(w: &mut impl Write, s: &str) -> std::io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn read_u32(r: &mut impl Read) -> Result<u32, NlpError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_str(r: &mut impl Read) -> Result<String, NlpError> {
    let len = read_u32(r)? as usize;
    if len > 1 << 24 {
        return Err(NlpError::Index(format!("string length {len} too large")));
    }
    let mut b = vec![0u8; len];
    r.read_exact(&mut b)?;
    String::from_utf8(b).map_err(|e| NlpError::Index(e.to_string()))
}
