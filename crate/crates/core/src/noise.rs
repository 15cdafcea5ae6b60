//! Label noise by pairwise labelset swaps.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mldata::MultilabelDataset;

/// Noise rate and seed. The generator is ChaCha8 seeded with `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub theta: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(theta: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "noise rate must lie in [0, 1], got {theta}"
            )));
        }
        Ok(NoiseSpec { theta, seed })
    }

    /// Number of instances whose labelsets take part in a swap for a corpus of `n`:
    /// `⌊θ·n⌋` rounded down to an even count.
    pub fn swapped_count(&self, n: usize) -> usize {
        // the epsilon absorbs products such as 0.29·100 = 28.999999999999996
        let sampled = ((self.theta * n as f64) + 1e-9).floor() as usize;
        sampled.min(n) & !1
    }
}

/// Samples `swapped_count(n)` instances without replacement and exchanges the
/// labelsets of sample positions `i` and `len - 1 - i`. Features are untouched.
pub fn induce_noise(train: &MultilabelDataset, spec: &NoiseSpec) -> Result<MultilabelDataset> {
    NoiseSpec::new(spec.theta, spec.seed)?;
    let n = train.len();
    let amount = spec.swapped_count(n);
    if amount == 0 {
        return Ok(train.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sample = index::sample(&mut rng, n, amount).into_vec();
    let mut labelsets = train.labelsets().to_vec();
    for i in 0..amount / 2 {
        labelsets.swap(sample[i], sample[amount - 1 - i]);
    }
    train.with_labelsets(labelsets)
}
