//! Dataset model: labelsets, multilabel datasets and corpus descriptors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of label indices, kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Labelset(Vec<usize>);

impl Labelset {
    pub fn empty() -> Self {
        Labelset(Vec::new())
    }

    /// Builds a labelset from arbitrary indices, sorting and deduplicating them.
    pub fn new(labels: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = labels.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Labelset(v)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: usize) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Largest label index, if any.
    pub fn max_label(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Size of the symmetric difference with `other`.
    pub fn symmetric_difference_len(&self, other: &Labelset) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut diff) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    diff += 1;
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    diff += 1;
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        diff + (a.len() - i) + (b.len() - j)
    }
}

impl FromIterator<usize> for Labelset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Labelset::new(iter)
    }
}

impl fmt::Display for Labelset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// Feature vectors paired with labelsets over an alphabet of `label_count` labels.
///
/// Features are stored densely in row-major order. Instances are immutable once
/// the dataset is built.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilabelDataset {
    n_features: usize,
    features: Vec<f64>,
    labelsets: Vec<Labelset>,
    label_count: usize,
    label_names: Option<Vec<String>>,
}

impl MultilabelDataset {
    /// Builds a dataset from a flat row-major feature buffer.
    pub fn from_flat(
        n_features: usize,
        features: Vec<f64>,
        labelsets: Vec<Labelset>,
        label_count: usize,
    ) -> Result<Self> {
        if label_count == 0 {
            return Err(Error::InvalidDataset("label count must be at least 1".into()));
        }
        let n = labelsets.len();
        if features.len() != n * n_features {
            return Err(Error::InvalidDataset(format!(
                "{} feature values for {} rows of {} features",
                features.len(),
                n,
                n_features
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n_features.max(1),
                col: pos % n_features.max(1),
            });
        }
        for ls in &labelsets {
            if let Some(max) = ls.max_label() {
                if max >= label_count {
                    return Err(Error::LabelOutOfRange {
                        index: max,
                        label_count,
                    });
                }
            }
        }
        Ok(MultilabelDataset {
            n_features,
            features,
            labelsets,
            label_count,
            label_names: None,
        })
    }

    /// Builds a dataset from one vector per row.
    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        labelsets: Vec<Labelset>,
        label_count: usize,
    ) -> Result<Self> {
        if rows.len() != labelsets.len() {
            return Err(Error::LengthMismatch {
                left: rows.len(),
                right: labelsets.len(),
            });
        }
        let n_features = rows.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(rows.len() * n_features);
        for row in &rows {
            if row.len() != n_features {
                return Err(Error::DimensionMismatch {
                    expected: n_features,
                    got: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(n_features, flat, labelsets, label_count)
    }

    pub fn with_label_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.label_count {
            return Err(Error::InvalidDataset(format!(
                "{} label names for {} labels",
                names.len(),
                self.label_count
            )));
        }
        self.label_names = Some(names);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labelsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labelsets.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }

    pub fn label_names(&self) -> Option<&[String]> {
        self.label_names.as_deref()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.len()).map(move |i| self.row(i))
    }

    pub fn labelset(&self, i: usize) -> &Labelset {
        &self.labelsets[i]
    }

    pub fn labelsets(&self) -> &[Labelset] {
        &self.labelsets
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    /// Returns a copy with the labelsets replaced; features and label metadata are kept.
    pub fn with_labelsets(&self, labelsets: Vec<Labelset>) -> Result<Self> {
        let mut ds = Self::from_flat(
            self.n_features,
            self.features.clone(),
            labelsets,
            self.label_count,
        )?;
        ds.label_names = self.label_names.clone();
        Ok(ds)
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labelsets = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            features.extend_from_slice(self.row(i));
            labelsets.push(self.labelsets[i].clone());
        }
        Ok(MultilabelDataset {
            n_features: self.n_features,
            features,
            labelsets,
            label_count: self.label_count,
            label_names: self.label_names.clone(),
        })
    }

    /// Builds a dataset sharing this one's label alphabet from generated prototypes.
    pub fn from_prototypes(&self, prototypes: Vec<(Vec<f64>, Labelset)>) -> Result<Self> {
        let mut features = Vec::with_capacity(prototypes.len() * self.n_features);
        let mut labelsets = Vec::with_capacity(prototypes.len());
        for (x, y) in prototypes {
            if x.len() != self.n_features {
                return Err(Error::DimensionMismatch {
                    expected: self.n_features,
                    got: x.len(),
                });
            }
            features.extend(x);
            labelsets.push(y);
        }
        let mut ds = Self::from_flat(self.n_features, features, labelsets, self.label_count)?;
        ds.label_names = self.label_names.clone();
        Ok(ds)
    }
}

/// Corpus-level statistics: size, dimensionality, label cardinality and density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusDescriptor {
    pub n: usize,
    pub f: usize,
    pub labels: usize,
    pub cardinality: f64,
    pub density: f64,
}

impl fmt::Display for CorpusDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} f={} L={} cardinality={:.4} density={:.4}",
            self.n, self.f, self.labels, self.cardinality, self.density
        )
    }
}

pub fn describe(ds: &MultilabelDataset) -> Result<CorpusDescriptor> {
    if ds.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let total: usize = ds.labelsets.iter().map(Labelset::len).sum();
    let cardinality = total as f64 / ds.len() as f64;
    Ok(CorpusDescriptor {
        n: ds.len(),
        f: ds.n_features,
        labels: ds.label_count,
        cardinality,
        density: cardinality / ds.label_count as f64,
    })
}
