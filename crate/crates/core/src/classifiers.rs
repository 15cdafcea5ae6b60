//! Multilabel kNN classifiers over a (possibly reduced) reference set.
//!
//! * BRkNN votes independently per label (strict majority of the k neighbours).
//! * LP-kNN treats each labelset as a class and returns the neighbourhood mode.
//! * ML-kNN combines label priors with neighbour-count likelihoods estimated by
//!   leave-one-out over the reference set and takes the MAP decision per label.
//!
//! Neighbours are ranked by Euclidean distance with ties broken by lower index.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::euclidean;
use crate::mldata::{Labelset, MultilabelDataset};

/// Indices of the `k` reference instances nearest to `q`, nearest first.
pub fn knn_indices(q: &[f64], reference: &MultilabelDataset, k: usize) -> Result<Vec<usize>> {
    knn_excluding(q, reference, k, None)
}

fn knn_excluding(
    q: &[f64],
    reference: &MultilabelDataset,
    k: usize,
    exclude: Option<usize>,
) -> Result<Vec<usize>> {
    let available = reference.len() - usize::from(exclude.is_some());
    if k > available {
        return Err(Error::KTooLarge { k, len: available });
    }
    if q.len() != reference.n_features() {
        return Err(Error::DimensionMismatch {
            expected: reference.n_features(),
            got: q.len(),
        });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut scored: Vec<(f64, usize)> = (0..reference.len())
        .filter(|&i| Some(i) != exclude)
        .map(|i| (euclidean(q, reference.row(i)), i))
        .collect();
    let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < scored.len() {
        scored.select_nth_unstable_by(k - 1, by_distance);
        scored.truncate(k);
    }
    scored.sort_unstable_by(by_distance);
    Ok(scored.into_iter().map(|(_, i)| i).collect())
}

/// Binary-relevance kNN: a label is predicted when strictly more than half of the
/// `k` neighbours carry it.
pub fn predict_br(q: &[f64], reference: &MultilabelDataset, k: usize) -> Result<Labelset> {
    let neighbours = knn_indices(q, reference, k)?;
    let mut votes = vec![0usize; reference.label_count()];
    for &i in &neighbours {
        for l in reference.labelset(i).iter() {
            votes[l] += 1;
        }
    }
    Ok(votes
        .iter()
        .enumerate()
        .filter(|&(_, &v)| 2 * v > k)
        .map(|(l, _)| l)
        .collect())
}

/// Label-powerset kNN: the most frequent labelset among the `k` neighbours; ties go
/// to the tied labelset carried by the nearest neighbour.
pub fn predict_lp(q: &[f64], reference: &MultilabelDataset, k: usize) -> Result<Labelset> {
    let neighbours = knn_indices(q, reference, k)?;
    let mut counts: HashMap<&Labelset, usize> = HashMap::new();
    for &i in &neighbours {
        *counts.entry(reference.labelset(i)).or_default() += 1;
    }
    let top = counts.values().copied().max().unwrap_or(0);
    Ok(neighbours
        .iter()
        .map(|&i| reference.labelset(i))
        .find(|y| counts[y] == top)
        .cloned()
        .unwrap_or_default())
}

/// Fitted ML-kNN model.
#[derive(Debug, Clone)]
pub struct MlknnModel {
    k: usize,
    smoothing: f64,
    /// `P(H_1^λ)` per label.
    priors: Vec<f64>,
    /// `P(c | H_1^λ)` for `c ∈ [0, k]`, per label.
    post_with: Vec<Vec<f64>>,
    /// `P(c | H_0^λ)` for `c ∈ [0, k]`, per label.
    post_without: Vec<Vec<f64>>,
    reference: MultilabelDataset,
}

/// Smoothing used by the ML-kNN estimates unless another value is given.
pub const DEFAULT_SMOOTHING: f64 = 1.0;

pub fn mlknn_fit(train: &MultilabelDataset, k: usize, smoothing: f64) -> Result<MlknnModel> {
    let n = train.len();
    if n <= k {
        return Err(Error::KTooLarge { k, len: n });
    }
    if !(smoothing > 0.0 && smoothing.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "smoothing must be positive, got {smoothing}"
        )));
    }
    let labels = train.label_count();
    let mut label_freq = vec![0usize; labels];
    for y in train.labelsets() {
        for l in y.iter() {
            label_freq[l] += 1;
        }
    }
    let priors = label_freq
        .iter()
        .map(|&c| (smoothing + c as f64) / (2.0 * smoothing + n as f64))
        .collect();

    let mut kappa_with = vec![vec![0usize; k + 1]; labels];
    let mut kappa_without = vec![vec![0usize; k + 1]; labels];
    let mut counts = vec![0usize; labels];
    for i in 0..n {
        let neighbours = knn_excluding(train.row(i), train, k, Some(i))?;
        counts.iter_mut().for_each(|c| *c = 0);
        for &j in &neighbours {
            for l in train.labelset(j).iter() {
                counts[l] += 1;
            }
        }
        let yi = train.labelset(i);
        for l in 0..labels {
            if yi.contains(l) {
                kappa_with[l][counts[l]] += 1;
            } else {
                kappa_without[l][counts[l]] += 1;
            }
        }
    }
    let normalize = |kappa: &[usize]| -> Vec<f64> {
        let total: usize = kappa.iter().sum();
        let denom = (k as f64 + 1.0) * smoothing + total as f64;
        kappa.iter().map(|&c| (smoothing + c as f64) / denom).collect()
    };
    Ok(MlknnModel {
        k,
        smoothing,
        priors,
        post_with: kappa_with.iter().map(|v| normalize(v)).collect(),
        post_without: kappa_without.iter().map(|v| normalize(v)).collect(),
        reference: train.clone(),
    })
}

impl MlknnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// `P(c | H_1^λ)` over `c ∈ [0, k]`.
    pub fn posterior_with(&self, label: usize) -> &[f64] {
        &self.post_with[label]
    }

    /// `P(c | H_0^λ)` over `c ∈ [0, k]`.
    pub fn posterior_without(&self, label: usize) -> &[f64] {
        &self.post_without[label]
    }

    /// MAP decision per label; equal posteriors exclude the label.
    pub fn predict(&self, q: &[f64]) -> Result<Labelset> {
        let neighbours = knn_indices(q, &self.reference, self.k)?;
        let mut counts = vec![0usize; self.priors.len()];
        for &j in &neighbours {
            for l in self.reference.labelset(j).iter() {
                counts[l] += 1;
            }
        }
        Ok((0..self.priors.len())
            .filter(|&l| {
                let c = counts[l];
                let with = self.priors[l] * self.post_with[l][c];
                let without = (1.0 - self.priors[l]) * self.post_without[l][c];
                with > without
            })
            .collect())
    }
}

pub fn mlknn_predict(model: &MlknnModel, q: &[f64]) -> Result<Labelset> {
    model.predict(q)
}

/// The three classifier families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Br,
    Lp,
    Mlknn,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::Br, ClassifierKind::Lp, ClassifierKind::Mlknn];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Br => "br",
            ClassifierKind::Lp => "lp",
            ClassifierKind::Mlknn => "mlknn",
        }
    }

    /// Largest usable k for a reference set of `len` instances.
    pub fn max_k(self, len: usize) -> usize {
        match self {
            ClassifierKind::Mlknn => len.saturating_sub(1),
            _ => len,
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "br" | "brknn" => Ok(ClassifierKind::Br),
            "lp" | "lpknn" | "lp-knn" => Ok(ClassifierKind::Lp),
            "mlknn" | "ml-knn" => Ok(ClassifierKind::Mlknn),
            _ => Err(Error::InvalidParameter(format!("unknown classifier {s:?}"))),
        }
    }
}

/// A classifier bound to its reference set.
#[derive(Debug, Clone)]
pub enum Classifier<'a> {
    Br { reference: &'a MultilabelDataset, k: usize },
    Lp { reference: &'a MultilabelDataset, k: usize },
    Mlknn(MlknnModel),
}

impl<'a> Classifier<'a> {
    pub fn fit(kind: ClassifierKind, reference: &'a MultilabelDataset, k: usize) -> Result<Self> {
        if k > reference.len() || (k == reference.len() && kind == ClassifierKind::Mlknn) {
            return Err(Error::KTooLarge { k, len: reference.len() });
        }
        Ok(match kind {
            ClassifierKind::Br => Classifier::Br { reference, k },
            ClassifierKind::Lp => Classifier::Lp { reference, k },
            ClassifierKind::Mlknn => Classifier::Mlknn(mlknn_fit(reference, k, DEFAULT_SMOOTHING)?),
        })
    }

    pub fn predict(&self, q: &[f64]) -> Result<Labelset> {
        match self {
            Classifier::Br { reference, k } => predict_br(q, reference, *k),
            Classifier::Lp { reference, k } => predict_lp(q, reference, *k),
            Classifier::Mlknn(model) => model.predict(q),
        }
    }

    /// Predictions for every row of `test`, in order.
    pub fn predict_all(&self, test: &MultilabelDataset) -> Result<Vec<Labelset>> {
        test.rows().map(|q| self.predict(q)).collect()
    }
}
