//! Seeded Gaussian-blob corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mldata::{Labelset, MultilabelDataset};

/// Parameters of a blob corpus. Instance `i` is drawn around blob `i mod clusters`
/// and carries that blob's labelset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub f: usize,
    /// Label alphabet size.
    pub labels: usize,
    pub clusters: usize,
    /// Per-blob labelsets; drawn at random when absent.
    #[serde(default)]
    pub labelsets: Option<Vec<Labelset>>,
    /// Blob centers; drawn uniformly from `[0, center_spread]^f` when absent.
    #[serde(default)]
    pub centers: Option<Vec<Vec<f64>>>,
    #[serde(default = "default_spread")]
    pub center_spread: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

fn default_spread() -> f64 {
    10.0
}

impl SyntheticSpec {
    pub fn new(n: usize, f: usize, labels: usize, clusters: usize, noise_sigma: f64, seed: u64) -> Self {
        SyntheticSpec {
            n,
            f,
            labels,
            clusters,
            labelsets: None,
            centers: None,
            center_spread: default_spread(),
            noise_sigma,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.clusters == 0 {
            return bad("clusters must be at least 1".into());
        }
        if self.n < self.clusters {
            return bad(format!("n = {} is below the cluster count {}", self.n, self.clusters));
        }
        if self.labels == 0 {
            return bad("label count must be at least 1".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise_sigma must be finite and non-negative, got {}", self.noise_sigma));
        }
        if let Some(ls) = &self.labelsets {
            if ls.len() != self.clusters {
                return bad(format!("{} labelsets for {} clusters", ls.len(), self.clusters));
            }
            if ls.iter().filter_map(Labelset::max_label).any(|m| m >= self.labels) {
                return bad("labelset index outside the label alphabet".into());
            }
        }
        if let Some(cs) = &self.centers {
            if cs.len() != self.clusters || cs.iter().any(|c| c.len() != self.f) {
                return bad("centers must be clusters × f".into());
            }
        }
        Ok(())
    }
}

/// Blob centers and labelsets resolved from a spec.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobLayout {
    pub centers: Vec<Vec<f64>>,
    pub labelsets: Vec<Labelset>,
}

fn layout(spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> BlobLayout {
    let centers = spec.centers.clone().unwrap_or_else(|| {
        (0..spec.clusters)
            .map(|_| (0..spec.f).map(|_| rng.random::<f64>() * spec.center_spread).collect())
            .collect()
    });
    let labelsets = spec.labelsets.clone().unwrap_or_else(|| {
        (0..spec.clusters)
            .map(|_| {
                let mut ls: Vec<usize> = (0..spec.labels).filter(|_| rng.random_bool(0.3)).collect();
                if ls.is_empty() {
                    ls.push(rng.random_range(0..spec.labels));
                }
                Labelset::new(ls)
            })
            .collect()
    });
    BlobLayout { centers, labelsets }
}

fn sample(
    spec: &SyntheticSpec,
    blobs: &BlobLayout,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<MultilabelDataset> {
    let normal = Normal::new(0.0, spec.noise_sigma.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut features = Vec::with_capacity(n * spec.f);
    let mut labelsets = Vec::with_capacity(n);
    for i in 0..n {
        let b = i % spec.clusters;
        for &c in &blobs.centers[b] {
            let jitter = if spec.noise_sigma == 0.0 { 0.0 } else { normal.sample(rng) };
            features.push(c + jitter);
        }
        labelsets.push(blobs.labelsets[b].clone());
    }
    MultilabelDataset::from_flat(spec.f, features, labelsets, spec.labels)
}

/// Generates `spec.n` instances.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<MultilabelDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let blobs = layout(spec, &mut rng);
    sample(spec, &blobs, spec.n, &mut rng)
}

/// Generates a training set identical to [`gen_synthetic`] plus a test set of
/// `test_n` instances drawn from the same blobs with an independent stream.
pub fn gen_synthetic_split(
    spec: &SyntheticSpec,
    test_n: usize,
) -> Result<(MultilabelDataset, MultilabelDataset)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let blobs = layout(spec, &mut rng);
    let train = sample(spec, &blobs, spec.n, &mut rng)?;
    let mut test_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    test_rng.set_stream(1);
    let test = sample(spec, &blobs, test_n, &mut test_rng)?;
    Ok((train, test))
}

/// The blob centers and labelsets a spec resolves to.
pub fn blob_layout(spec: &SyntheticSpec) -> Result<BlobLayout> {
    spec.validate()?;
    Ok(layout(spec, &mut ChaCha8Rng::seed_from_u64(spec.seed)))
}
