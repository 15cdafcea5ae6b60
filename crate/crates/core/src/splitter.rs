//! Space partitioning by recursive farthest-pair splitting.
//!
//! Starting from the whole dataset as a single cluster, the engine repeatedly picks
//! one cluster, finds its two farthest members and assigns every member to the
//! closer of the two (ties go to the first). Which cluster is picked and when the
//! loop stops are pluggable, which yields the partitioning stage of every reducer in
//! [`crate::reducers`].

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, euclidean, FarthestPair};
use crate::mldata::MultilabelDataset;

/// A non-empty set of row indices with cached geometry.
#[derive(Debug, Clone)]
pub struct Cluster {
    members: Vec<usize>,
    pair: FarthestPair,
    overlap: OnceLock<f64>,
}

impl Cluster {
    /// Builds a cluster; members are sorted so scans and tie-breaking are order independent.
    pub fn new(ds: &MultilabelDataset, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&last) = members.last() {
            if last >= ds.len() {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    len: ds.len(),
                });
            }
        }
        let pair = geometry::farthest_pair(ds, &members)?;
        Ok(Cluster {
            members,
            pair,
            overlap: OnceLock::new(),
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn farthest_pair(&self) -> FarthestPair {
        self.pair
    }

    pub fn diameter(&self) -> f64 {
        self.pair.diameter
    }

    /// A cluster whose members all share one feature vector cannot be split.
    pub fn is_terminal(&self) -> bool {
        self.pair.diameter == 0.0
    }

    pub fn overlap_degree(&self, ds: &MultilabelDataset) -> f64 {
        *self
            .overlap
            .get_or_init(|| geometry::overlap_degree(ds, &self.members))
    }
}

impl PartialEq for Cluster {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

/// How the next cluster to split is chosen among the eligible ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionRule {
    /// Largest farthest-pair distance.
    Diameter,
    /// Largest overlapping degree.
    Overlap,
}

/// When partitioning ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StoppingRule {
    /// Stop once this many clusters exist.
    Count(usize),
    /// Stop once every splittable cluster has a label shared by all its members.
    Homogeneity,
}

/// What makes a cluster "mixed" for the purpose of preferring it when splitting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedCriterion {
    /// More than one distinct labelset among the members.
    #[default]
    DistinctLabelsets,
    /// No label carried by all members.
    NoCommonLabel,
}

impl MixedCriterion {
    fn is_mixed(self, ds: &MultilabelDataset, members: &[usize]) -> bool {
        match self {
            MixedCriterion::DistinctLabelsets => geometry::distinct_labelsets(ds, members) > 1,
            MixedCriterion::NoCommonLabel => !geometry::has_common_label(ds, members),
        }
    }
}

/// Splits a cluster around its farthest pair `(p1, p2)`: members no farther from
/// `p1` than from `p2` form the first part. Returns `None` for terminal clusters.
pub fn split_cluster(ds: &MultilabelDataset, cluster: &Cluster) -> Result<Option<(Cluster, Cluster)>> {
    if cluster.is_terminal() {
        return Ok(None);
    }
    let FarthestPair { first, second, .. } = cluster.pair;
    let (p1, p2) = (ds.row(first), ds.row(second));
    let (near, far): (Vec<usize>, Vec<usize>) = cluster
        .members
        .iter()
        .partition(|&&i| euclidean(ds.row(i), p1) <= euclidean(ds.row(i), p2));
    Ok(Some((Cluster::new(ds, near)?, Cluster::new(ds, far)?)))
}

/// Partitioning engine parameterized by selection and stopping rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partitioner {
    pub select: SelectionRule,
    pub stop: StoppingRule,
    pub mixed: MixedCriterion,
}

impl Partitioner {
    pub fn new(select: SelectionRule, stop: StoppingRule) -> Self {
        Partitioner {
            select,
            stop,
            mixed: MixedCriterion::default(),
        }
    }

    pub fn with_mixed_criterion(mut self, mixed: MixedCriterion) -> Self {
        self.mixed = mixed;
        self
    }

    /// Runs the partitioning loop. Clusters are returned in creation order: a split
    /// keeps its first part in the parent's slot and appends the second.
    pub fn run(&self, ds: &MultilabelDataset) -> Result<Vec<Cluster>> {
        let n = ds.len();
        if n == 0 {
            return Err(Error::EmptyCorpus);
        }
        if let StoppingRule::Count(n_d) = self.stop {
            if n_d == 0 {
                return Err(Error::InvalidParameter(
                    "partition count must be at least 1".into(),
                ));
            }
            if n_d > n {
                return Err(Error::PartitionCountExceedsCorpus { n_d, n });
            }
        }

        let mut clusters = vec![Cluster::new(ds, (0..n).collect())?];
        // mixed[i] caches the mixed flag of clusters[i]
        let mut mixed = vec![self.mixed.is_mixed(ds, clusters[0].members())];
        let mut homogeneous = vec![geometry::has_common_label(ds, clusters[0].members())];

        loop {
            let candidates: Vec<usize> = match self.stop {
                StoppingRule::Count(n_d) => {
                    if clusters.len() >= n_d {
                        break;
                    }
                    let splittable: Vec<usize> =
                        (0..clusters.len()).filter(|&i| !clusters[i].is_terminal()).collect();
                    let preferred: Vec<usize> =
                        splittable.iter().copied().filter(|&i| mixed[i]).collect();
                    if preferred.is_empty() {
                        splittable
                    } else {
                        preferred
                    }
                }
                StoppingRule::Homogeneity => (0..clusters.len())
                    .filter(|&i| !clusters[i].is_terminal() && !homogeneous[i])
                    .collect(),
            };
            let Some(target) = self.pick(ds, &clusters, &candidates) else {
                break;
            };
            let (near, far) = split_cluster(ds, &clusters[target])?
                .expect("candidates exclude terminal clusters");
            mixed[target] = self.mixed.is_mixed(ds, near.members());
            homogeneous[target] = geometry::has_common_label(ds, near.members());
            mixed.push(self.mixed.is_mixed(ds, far.members()));
            homogeneous.push(geometry::has_common_label(ds, far.members()));
            clusters[target] = near;
            clusters.push(far);
        }

        debug_assert!(is_disjoint_cover(&clusters, n));
        Ok(clusters)
    }

    /// Highest-scoring candidate; the earliest index wins ties.
    fn pick(&self, ds: &MultilabelDataset, clusters: &[Cluster], candidates: &[usize]) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for &i in candidates {
            let score = match self.select {
                SelectionRule::Diameter => clusters[i].diameter(),
                SelectionRule::Overlap => clusters[i].overlap_degree(ds),
            };
            match best {
                Some((_, s)) if score <= s => {}
                _ => best = Some((i, score)),
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Convenience wrapper over [`Partitioner::run`] with the default mixed-cluster criterion.
pub fn partition(
    ds: &MultilabelDataset,
    select: SelectionRule,
    stop: StoppingRule,
) -> Result<Vec<Cluster>> {
    Partitioner::new(select, stop).run(ds)
}

/// Whether `clusters` partition `0..n` exactly.
pub fn is_disjoint_cover(clusters: &[Cluster], n: usize) -> bool {
    let mut seen = vec![false; n];
    for c in clusters {
        for &i in c.members() {
            if i >= n || seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    seen.into_iter().all(|s| s)
}
