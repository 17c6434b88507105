use lcr_core::model::NodeId;
use lcr_core::nlp::{similarity, IndexEntry, Match, SentenceIndex, SentenceVector};
use lcr_core::par::ExecMode;
use lcr_core::store::TextKind;
use proptest::prelude::*;

const DIM: usize = 16;

fn corpus() -> impl Strategy<Value = (Vec<Vec<f32>>, Vec<usize>, Vec<f32>, usize, f64)> {
    (
        proptest::collection::vec(proptest::collection::vec(-1.0f32..1.0, DIM), 1..120),
        proptest::collection::vec(any::<usize>(), 0..20),
        proptest::collection::vec(-1.0f32..1.0, DIM),
        0usize..15,
        0.0f64..0.8,
    )
}

fn index_of(raw: &[Vec<f32>], dups: &[usize]) -> (SentenceIndex, Vec<(NodeId, SentenceVector)>) {
    let mut rows: Vec<Vec<f32>> = raw.to_vec();
    // Copies of existing rows force exact similarity ties.
    for d in dups {
        rows.push(raw[d % raw.len()].clone());
    }
    let mut items = Vec::new();
    let mut plain = Vec::new();
    for (i, r) in rows.into_iter().enumerate() {
        let Ok(v) = SentenceVector::from_raw(r) else { continue };
        // Ids are assigned in scrambled order so tie-breaking is not positional.
        let id = NodeId::new(format!("urn:test:{:04}", (i * 7919) % 10007));
        plain.push((id.clone(), v.clone()));
        items.push((
            IndexEntry {
                id,
                kind: TextKind::Sentence,
                text: format!("s{i}"),
            },
            v,
        ));
    }
    (SentenceIndex::from_vectors("test", DIM, items).unwrap(), plain)
}

/// Exhaustive scan: repeatedly take the best remaining candidate.
fn oracle(corpus: &[(NodeId, SentenceVector)], q: &SentenceVector, k: usize, floor: f64) -> Vec<(NodeId, f64)> {
    let mut pool: Vec<(NodeId, f64)> = corpus
        .iter()
        .map(|(id, v)| (id.clone(), similarity(q, v).unwrap()))
        .filter(|(_, s)| *s >= floor)
        .collect();
    let mut out = Vec::new();
    while out.len() < k && !pool.is_empty() {
        let mut best = 0;
        for i in 1..pool.len() {
            let (bi, bs) = &pool[best];
            let (ci, cs) = &pool[i];
            if cs > bs || (cs == bs && ci < bi) {
                best = i;
            }
        }
        out.push(pool.swap_remove(best));
    }
    out
}

fn flat(ms: &[Match]) -> Vec<(NodeId, f64)> {
    ms.iter().map(|m| (m.signal.clone(), m.similarity)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nearest_equals_exhaustive_scan((raw, dups, q, k, floor) in corpus()) {
        let (index, plain) = index_of(&raw, &dups);
        let Ok(q) = SentenceVector::from_raw(q) else { return Ok(()) };
        let want = oracle(&plain, &q, k, floor);
        for mode in [ExecMode::Sequential, ExecMode::Parallel] {
            prop_assert_eq!(&flat(&index.nearest(&q, k, floor, mode).unwrap()), &want);
        }
    }

    #[test]
    fn stored_index_answers_identically((raw, dups, q, k, floor) in corpus()) {
        let (index, _) = index_of(&raw, &dups);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("idx.bin");
        index.save(&path).unwrap();
        let loaded = SentenceIndex::load(&path, Some("test")).unwrap();
        prop_assert_eq!(&loaded, &index);
        let Ok(q) = SentenceVector::from_raw(q) else { return Ok(()) };
        prop_assert_eq!(
            loaded.nearest(&q, k, floor, ExecMode::Parallel).unwrap(),
            index.nearest(&q, k, floor, ExecMode::Parallel).unwrap()
        );
    }
}
