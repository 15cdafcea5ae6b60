//! Distance and cluster-geometry primitives.
//!
//! Clusters are passed as slices of row indices into a [`MultilabelDataset`].

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::mldata::{Labelset, MultilabelDataset};

/// Euclidean distance between two feature vectors of equal dimension.
pub fn distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(euclidean(a, b))
}

/// Unchecked variant used on hot paths where dimensions are known to match.
#[inline]
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// The two most distant members of a cluster and their distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarthestPair {
    pub first: usize,
    pub second: usize,
    pub diameter: f64,
}

/// Exact farthest pair by exhaustive scan.
///
/// Ties resolve to the pair with the smallest positions `(i, j)` within `cluster`,
/// compared lexicographically. A singleton yields `(i, i, 0)`.
pub fn farthest_pair(ds: &MultilabelDataset, cluster: &[usize]) -> Result<FarthestPair> {
    let first = *cluster.first().ok_or(Error::EmptyCluster)?;
    let mut best = FarthestPair {
        first,
        second: first,
        diameter: 0.0,
    };
    for (pos, &i) in cluster.iter().enumerate() {
        let xi = ds.row(i);
        for &j in &cluster[pos + 1..] {
            let d = euclidean(xi, ds.row(j));
            if d > best.diameter {
                best = FarthestPair {
                    first: i,
                    second: j,
                    diameter: d,
                };
            }
        }
    }
    Ok(best)
}

/// Per-coordinate median of the cluster members; even counts take the mean of the
/// two middle values.
pub fn coord_median(ds: &MultilabelDataset, cluster: &[usize]) -> Result<Vec<f64>> {
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let f = ds.n_features();
    let n = cluster.len();
    let mut column = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(f);
    for c in 0..f {
        column.clear();
        column.extend(cluster.iter().map(|&i| ds.row(i)[c]));
        out.push(median_in_place(&mut column));
    }
    Ok(out)
}

fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (_, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        // the lower middle is the maximum of the left partition
        let lower = values[..mid]
            .iter()
            .copied()
            .max_by(f64::total_cmp)
            .unwrap_or(upper);
        lower + (upper - lower) / 2.0
    }
}

/// Overlapping degree of a cluster: mean distance between members with different
/// labelsets divided by mean distance between members sharing a labelset.
///
/// Returns `0.0` when no pair has different labelsets and `f64::INFINITY` when no
/// pair shares a labelset (or all same-labelset pairs coincide).
pub fn overlap_degree(ds: &MultilabelDataset, cluster: &[usize]) -> f64 {
    let mut sum_diff = 0.0;
    let mut n_diff = 0usize;
    let mut sum_same = 0.0;
    let mut n_same = 0usize;
    for (pos, &i) in cluster.iter().enumerate() {
        let (xi, yi) = (ds.row(i), ds.labelset(i));
        for &j in &cluster[pos + 1..] {
            let d = euclidean(xi, ds.row(j));
            if yi == ds.labelset(j) {
                sum_same += d;
                n_same += 1;
            } else {
                sum_diff += d;
                n_diff += 1;
            }
        }
    }
    if n_diff == 0 {
        return 0.0;
    }
    if n_same == 0 || sum_same == 0.0 {
        return f64::INFINITY;
    }
    (sum_diff / sum_same) * (n_same as f64 / n_diff as f64)
}

/// Number of distinct labelsets among the cluster members.
pub fn distinct_labelsets(ds: &MultilabelDataset, cluster: &[usize]) -> usize {
    cluster
        .iter()
        .map(|&i| ds.labelset(i))
        .collect::<HashSet<&Labelset>>()
        .len()
}

/// Whether some label is carried by every member of the cluster.
pub fn has_common_label(ds: &MultilabelDataset, cluster: &[usize]) -> bool {
    let Some((&first, rest)) = cluster.split_first() else {
        return false;
    };
    ds.labelset(first)
        .iter()
        .any(|l| rest.iter().all(|&i| ds.labelset(i).contains(l)))
}
