//! Fixtures shared by the benchmarks.

use mlpg_core::corpus::{gen_synthetic, SyntheticSpec};
use mlpg_core::{EvalRecord, MultilabelDataset};

/// Blob corpus with `n` instances, 8 features, 6 labels and 12 blobs.
pub fn blobs(n: usize, seed: u64) -> MultilabelDataset {
    gen_synthetic(&SyntheticSpec::new(n, 8, 6, 12, 1.5, seed)).expect("valid blob spec")
}

/// Deterministic cloud of `n` (hl, size) points.
pub fn cloud(n: usize) -> Vec<mlpg_core::ParetoPoint> {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    (0..n)
        .map(|i| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let hl = (state % 10_000) as f64 / 10_000.0;
            let size = ((state >> 20) % 10_000) as f64 / 100.0;
            mlpg_core::ParetoPoint::new(format!("p{i}"), hl, size)
        })
        .collect()
}

pub fn records(n: usize) -> Vec<EvalRecord> {
    cloud(n)
        .into_iter()
        .enumerate()
        .map(|(i, p)| EvalRecord {
            method: format!("m{}", i % 13),
            corpus: format!("c{}", i % 7),
            theta: [0.0, 0.2, 0.4][i % 3],
            classifier: mlpg_core::ClassifierKind::ALL[i % 3],
            k: 1 + 2 * (i % 4),
            hl: p.hl,
            size_pct: p.size_pct,
        })
        .collect()
}
