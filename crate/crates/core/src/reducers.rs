//! Prototype-generation reducers.
//!
//! Every reducer maps a training set to a smaller set of synthetic prototypes over
//! the same label alphabet:
//!
//! | method | partitioning                          | merging              |
//! |--------|---------------------------------------|----------------------|
//! | MChen  | largest diameter, `n_d` clusters      | one majority prototype per cluster |
//! | MRSP1  | largest diameter, `n_d` clusters      | one prototype per labelset |
//! | MRSP2  | largest overlapping degree, `n_d` clusters | one prototype per labelset |
//! | MRSP3  | largest diameter, until homogeneous   | one majority prototype per cluster |
//! | MRHC   | recursive label-mean clustering       | one majority prototype per cluster |
//! | ALL    | none (identity)                       | none |
//!
//! `n_d` is `m` percent of the training set size.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{self, euclidean};
use crate::mldata::{Labelset, MultilabelDataset};
use crate::splitter::{
    split_cluster, Cluster, Partitioner, SelectionRule, StoppingRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    All,
    Mrhc,
    MChen,
    Mrsp1,
    Mrsp2,
    Mrsp3,
}

impl Method {
    pub fn takes_percentage(self) -> bool {
        matches!(self, Method::MChen | Method::Mrsp1 | Method::Mrsp2)
    }

    fn name(self) -> &'static str {
        match self {
            Method::All => "ALL",
            Method::Mrhc => "MRHC",
            Method::MChen => "MChen",
            Method::Mrsp1 => "MRSP1",
            Method::Mrsp2 => "MRSP2",
            Method::Mrsp3 => "MRSP3",
        }
    }
}

/// A reduction method with its size parameter `m` (percent of the training set)
/// where the method takes one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducerSpec {
    method: Method,
    m: Option<u32>,
}

impl ReducerSpec {
    pub fn new(method: Method, m: Option<u32>) -> Result<Self> {
        match (method.takes_percentage(), m) {
            (true, Some(p)) if (1..=100).contains(&p) => Ok(ReducerSpec { method, m }),
            (true, Some(p)) => Err(Error::InvalidParameter(format!(
                "m must lie in [1, 100], got {p}"
            ))),
            (true, None) => Err(Error::InvalidParameter(format!(
                "{} requires a size parameter m",
                method.name()
            ))),
            (false, None) => Ok(ReducerSpec { method, m }),
            (false, Some(_)) => Err(Error::InvalidParameter(format!(
                "{} takes no size parameter",
                method.name()
            ))),
        }
    }

    pub fn all() -> Self {
        ReducerSpec { method: Method::All, m: None }
    }

    pub fn mrhc() -> Self {
        ReducerSpec { method: Method::Mrhc, m: None }
    }

    pub fn mrsp3() -> Self {
        ReducerSpec { method: Method::Mrsp3, m: None }
    }

    pub fn mchen(m: u32) -> Result<Self> {
        Self::new(Method::MChen, Some(m))
    }

    pub fn mrsp1(m: u32) -> Result<Self> {
        Self::new(Method::Mrsp1, Some(m))
    }

    pub fn mrsp2(m: u32) -> Result<Self> {
        Self::new(Method::Mrsp2, Some(m))
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn m(&self) -> Option<u32> {
        self.m
    }

    /// Target cluster count for a training set of `n` instances, or `None` for
    /// methods without a size parameter.
    pub fn target_partitions(&self, n: usize) -> Option<usize> {
        self.m.map(|m| target_partitions(m, n))
    }
}

/// `round(m·n/100)` with halves rounded away from zero, clamped to `[1, n]`.
pub fn target_partitions(m: u32, n: usize) -> usize {
    let scaled = (m as usize * n + 50) / 100;
    scaled.clamp(1, n.max(1))
}

impl fmt::Display for ReducerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m {
            Some(m) => write!(f, "{}_{}", self.method.name(), m),
            None => f.write_str(self.method.name()),
        }
    }
}

impl FromStr for ReducerSpec {
    type Err = Error;

    /// Accepts `all`, `mrhc`, `mrsp3`, and `mchen_10` / `mrsp1:30` style ids,
    /// case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, m) = match lower.split_once(['_', ':']) {
            Some((name, m)) => {
                let m = m
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidParameter(format!("bad size parameter in {s:?}")))?;
                (name, Some(m))
            }
            None => (lower.as_str(), None),
        };
        let method = match name {
            "all" => Method::All,
            "mrhc" => Method::Mrhc,
            "mchen" => Method::MChen,
            "mrsp1" => Method::Mrsp1,
            "mrsp2" => Method::Mrsp2,
            "mrsp3" => Method::Mrsp3,
            _ => return Err(Error::InvalidParameter(format!("unknown method {s:?}"))),
        };
        ReducerSpec::new(method, m)
    }
}

impl Serialize for ReducerSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReducerSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionResult {
    pub reduced: MultilabelDataset,
    /// `100·|R|/|T|`.
    pub size_pct: f64,
    /// Number of clusters the partitioning stage produced.
    pub partitions: usize,
}

/// One prototype at the cluster's coordinate median carrying every label present in
/// at least half of the members. The labelset may come out empty.
pub fn merge_majority(ds: &MultilabelDataset, members: &[usize]) -> Result<(Vec<f64>, Labelset)> {
    let x = geometry::coord_median(ds, members)?;
    let mut counts = vec![0usize; ds.label_count()];
    for &i in members {
        for l in ds.labelset(i).iter() {
            counts[l] += 1;
        }
    }
    let labels = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0 && 2 * c >= members.len())
        .map(|(l, _)| l)
        .collect();
    Ok((x, labels))
}

/// One prototype per distinct labelset in the cluster, at the coordinate median of
/// that labelset's members, in first-occurrence order.
pub fn merge_per_labelset(
    ds: &MultilabelDataset,
    members: &[usize],
) -> Result<Vec<(Vec<f64>, Labelset)>> {
    let mut order: Vec<&Labelset> = Vec::new();
    let mut groups: HashMap<&Labelset, Vec<usize>> = HashMap::new();
    for &i in members {
        let y = ds.labelset(i);
        groups
            .entry(y)
            .or_insert_with(|| {
                order.push(y);
                Vec::new()
            })
            .push(i);
    }
    order
        .into_iter()
        .map(|y| Ok((geometry::coord_median(ds, &groups[y])?, y.clone())))
        .collect()
}

/// Applies `spec` to the training set.
pub fn reduce(spec: &ReducerSpec, train: &MultilabelDataset) -> Result<ReductionResult> {
    if train.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = train.len();
    let (prototypes, partitions) = match spec.method {
        Method::All => {
            return Ok(ReductionResult {
                reduced: train.clone(),
                size_pct: 100.0,
                partitions: n,
            })
        }
        Method::MChen | Method::Mrsp1 | Method::Mrsp2 => {
            let n_d = spec.target_partitions(n).expect("validated by ReducerSpec::new");
            let select = if spec.method == Method::Mrsp2 {
                SelectionRule::Overlap
            } else {
                SelectionRule::Diameter
            };
            let clusters = Partitioner::new(select, StoppingRule::Count(n_d)).run(train)?;
            let protos = if spec.method == Method::MChen {
                majority_prototypes(train, &clusters)?
            } else {
                let mut out = Vec::new();
                for c in &clusters {
                    out.extend(merge_per_labelset(train, c.members())?);
                }
                out
            };
            (protos, clusters.len())
        }
        Method::Mrsp3 => {
            let clusters =
                Partitioner::new(SelectionRule::Diameter, StoppingRule::Homogeneity).run(train)?;
            (majority_prototypes(train, &clusters)?, clusters.len())
        }
        Method::Mrhc => {
            let groups = rhc_clusters(train)?;
            let protos = groups
                .iter()
                .map(|g| merge_majority(train, g))
                .collect::<Result<Vec<_>>>()?;
            (protos, groups.len())
        }
    };
    let reduced = train.from_prototypes(prototypes)?;
    Ok(ReductionResult {
        size_pct: 100.0 * reduced.len() as f64 / n as f64,
        reduced,
        partitions,
    })
}

fn majority_prototypes(
    ds: &MultilabelDataset,
    clusters: &[Cluster],
) -> Result<Vec<(Vec<f64>, Labelset)>> {
    clusters.iter().map(|c| merge_majority(ds, c.members())).collect()
}

/// Recursive homogeneous clustering used by the MRHC baseline.
///
/// A cluster is final when some label is shared by all its members or when all
/// members coincide. Otherwise every member moves to the nearest per-label mean
/// (lowest label on ties); if that leaves a single group the cluster is split
/// around its farthest pair instead. Clusters are processed breadth-first and
/// returned in the order they become final.
pub fn rhc_clusters(ds: &MultilabelDataset) -> Result<Vec<Vec<usize>>> {
    let mut queue = std::collections::VecDeque::from([(0..ds.len()).collect::<Vec<usize>>()]);
    let mut done = Vec::new();
    while let Some(members) = queue.pop_front() {
        if geometry::has_common_label(ds, &members) || all_coincide(ds, &members) {
            done.push(members);
            continue;
        }
        let groups = label_mean_groups(ds, &members);
        if groups.len() > 1 {
            queue.extend(groups);
            continue;
        }
        let cluster = Cluster::new(ds, members)?;
        match split_cluster(ds, &cluster)? {
            Some((a, b)) => {
                queue.push_back(a.members().to_vec());
                queue.push_back(b.members().to_vec());
            }
            None => done.push(cluster.members().to_vec()),
        }
    }
    Ok(done)
}

fn all_coincide(ds: &MultilabelDataset, members: &[usize]) -> bool {
    let Some((&first, rest)) = members.split_first() else {
        return true;
    };
    let x0 = ds.row(first);
    rest.iter().all(|&i| ds.row(i) == x0)
}

fn label_mean_groups(ds: &MultilabelDataset, members: &[usize]) -> Vec<Vec<usize>> {
    let f = ds.n_features();
    let mut sums: Vec<Option<(Vec<f64>, usize)>> = vec![None; ds.label_count()];
    for &i in members {
        for l in ds.labelset(i).iter() {
            let (sum, count) = sums[l].get_or_insert_with(|| (vec![0.0; f], 0));
            for (s, v) in sum.iter_mut().zip(ds.row(i)) {
                *s += v;
            }
            *count += 1;
        }
    }
    let means: Vec<Vec<f64>> = sums
        .into_iter()
        .flatten()
        .map(|(sum, count)| sum.into_iter().map(|s| s / count as f64).collect())
        .collect();
    if means.is_empty() {
        return vec![members.to_vec()];
    }
    let mut groups = vec![Vec::new(); means.len()];
    for &i in members {
        let x = ds.row(i);
        let mut best = (0, f64::INFINITY);
        for (g, mean) in means.iter().enumerate() {
            let d = euclidean(x, mean);
            if d < best.1 {
                best = (g, d);
            }
        }
        groups[best.0].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(v: &[usize]) -> Labelset {
        Labelset::new(v.iter().copied())
    }

    fn ds(rows: &[&[f64]], labels: &[&[usize]], l: usize) -> MultilabelDataset {
        MultilabelDataset::from_rows(
            rows.iter().map(|r| r.to_vec()).collect(),
            labels.iter().map(|y| ls(y)).collect(),
            l,
        )
        .unwrap()
    }

    #[test]
    fn spec_parsing_and_display() {
        let s: ReducerSpec = "mchen_10".parse().unwrap();
        assert_eq!(s.to_string(), "MChen_10");
        assert_eq!("MRSP2:70".parse::<ReducerSpec>().unwrap().to_string(), "MRSP2_70");
        assert_eq!("mrsp3".parse::<ReducerSpec>().unwrap(), ReducerSpec::mrsp3());
        assert!("mchen".parse::<ReducerSpec>().is_err());
        assert!("all_10".parse::<ReducerSpec>().is_err());
        assert!("mchen_0".parse::<ReducerSpec>().is_err());
        assert!("knn".parse::<ReducerSpec>().is_err());
    }

    #[test]
    fn partition_target_rounding() {
        assert_eq!(target_partitions(10, 391), 39);
        assert_eq!(target_partitions(10, 395), 40); // 39.5 rounds away from zero
        assert_eq!(target_partitions(10, 4), 1); // 0.4 clamps up to 1
        assert_eq!(target_partitions(100, 7), 7);
    }

    #[test]
    fn majority_boundary_includes_half() {
        let d = ds(
            &[&[0.0], &[1.0], &[2.0], &[3.0]],
            &[&[0, 1], &[0], &[1], &[]],
            2,
        );
        let (x, y) = merge_majority(&d, &[0, 1, 2, 3]).unwrap();
        assert_eq!(y, ls(&[0, 1]));
        assert_eq!(x, vec![1.5]);
    }

    #[test]
    fn majority_singleton() {
        let d = ds(&[&[4.0, 2.0]], &[&[1, 2]], 3);
        assert_eq!(merge_majority(&d, &[0]).unwrap(), (vec![4.0, 2.0], ls(&[1, 2])));
    }

    #[test]
    fn majority_five_member_cluster() {
        // square on all five, circle on two, diamond on one
        let d = ds(
            &[&[0.0], &[1.0], &[2.0], &[3.0], &[4.0]],
            &[&[0, 1], &[0, 1], &[0, 2], &[0], &[0]],
            3,
        );
        assert_eq!(merge_majority(&d, &[0, 1, 2, 3, 4]).unwrap().1, ls(&[0]));
    }

    #[test]
    fn majority_may_be_empty() {
        let d = ds(&[&[0.0], &[1.0], &[2.0]], &[&[0], &[1], &[2]], 3);
        assert!(merge_majority(&d, &[0, 1, 2]).unwrap().1.is_empty());
    }

    #[test]
    fn per_labelset_groups() {
        let d = ds(
            &[&[0.0, 0.0], &[2.0, 0.0], &[10.0, 10.0], &[12.0, 10.0], &[0.0, 20.0], &[0.0, 22.0]],
            &[&[0], &[0], &[0, 1], &[0, 1], &[1], &[1]],
            2,
        );
        let protos = merge_per_labelset(&d, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(
            protos,
            vec![
                (vec![1.0, 0.0], ls(&[0])),
                (vec![11.0, 10.0], ls(&[0, 1])),
                (vec![0.0, 21.0], ls(&[1])),
            ]
        );
        let single = merge_per_labelset(&d, &[0, 1]).unwrap();
        assert_eq!(single, vec![merge_majority(&d, &[0, 1]).unwrap()]);
    }

    #[test]
    fn per_labelset_first_occurrence_order() {
        let d = ds(&[&[0.0], &[1.0], &[2.0]], &[&[1], &[0], &[1]], 2);
        let protos = merge_per_labelset(&d, &[0, 1, 2]).unwrap();
        assert_eq!(protos[0].1, ls(&[1]));
        assert_eq!(protos[1].1, ls(&[0]));
    }

    #[test]
    fn all_is_identity() {
        let d = ds(&[&[0.0], &[1.0]], &[&[0], &[]], 1);
        let r = reduce(&ReducerSpec::all(), &d).unwrap();
        assert_eq!(r.reduced, d);
        assert_eq!(r.size_pct, 100.0);
    }

    #[test]
    fn mchen_exhaustive_is_identity_up_to_order() {
        let d = ds(
            &[&[0.0], &[3.0], &[7.0], &[8.5]],
            &[&[0], &[1], &[0, 1], &[]],
            2,
        );
        let r = reduce(&ReducerSpec::mchen(100).unwrap(), &d).unwrap();
        assert_eq!(r.reduced.len(), 4);
        let mut got: Vec<(Vec<u64>, Labelset)> = r
            .reduced
            .rows()
            .zip(r.reduced.labelsets())
            .map(|(x, y)| (x.iter().map(|v| v.to_bits()).collect(), y.clone()))
            .collect();
        let mut want: Vec<(Vec<u64>, Labelset)> = d
            .rows()
            .zip(d.labelsets())
            .map(|(x, y)| (x.iter().map(|v| v.to_bits()).collect(), y.clone()))
            .collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn mrsp1_not_smaller_than_mchen() {
        let d = ds(
            &[&[0.0], &[0.1], &[0.2], &[5.0], &[5.1], &[5.2]],
            &[&[0], &[1], &[0], &[1], &[1], &[0, 1]],
            2,
        );
        let chen = reduce(&ReducerSpec::mchen(50).unwrap(), &d).unwrap();
        let rsp1 = reduce(&ReducerSpec::mrsp1(50).unwrap(), &d).unwrap();
        assert_eq!(chen.reduced.len(), 3);
        assert!(rsp1.reduced.len() >= chen.reduced.len());
    }

    #[test]
    fn mrhc_separates_label_groups() {
        let d = ds(
            &[&[0.0], &[0.5], &[10.0], &[10.5]],
            &[&[0], &[0], &[1], &[1]],
            2,
        );
        let groups = rhc_clusters(&d).unwrap();
        assert_eq!(groups, vec![vec![0, 1], vec![2, 3]]);
        let r = reduce(&ReducerSpec::mrhc(), &d).unwrap();
        assert_eq!(r.reduced.len(), 2);
        assert_eq!(r.reduced.labelset(0), &ls(&[0]));
        assert_eq!(r.reduced.labelset(1), &ls(&[1]));
    }

    #[test]
    fn mrhc_handles_empty_labelsets_and_duplicates() {
        let d = ds(
            &[&[0.0], &[0.0], &[3.0], &[4.0]],
            &[&[], &[0], &[], &[]],
            1,
        );
        let groups = rhc_clusters(&d).unwrap();
        let mut all: Vec<usize> = groups.concat();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }
}
