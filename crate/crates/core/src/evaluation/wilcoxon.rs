use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Significance level for verdicts.
pub const SIGNIFICANCE: f64 = 0.05;

/// Largest number of non-zero pairs for which the exact null distribution is used.
pub const EXACT_MAX_PAIRS: usize = 20;

const MIN_PAIRS: usize = 5;

/// Outcome for the first sample relative to the second, for minimized quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Significantly smaller.
    Improve,
    /// Significantly larger.
    Worsen,
    NoDifference,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Improve => "improve",
            Verdict::Worsen => "worsen",
            Verdict::NoDifference => "no_difference",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Verdict::Improve => Verdict::Worsen,
            Verdict::Worsen => Verdict::Improve,
            Verdict::NoDifference => Verdict::NoDifference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Number of pairs left after dropping zero differences.
    pub n: usize,
    /// Rank sum of positive differences `a - b`.
    pub w_plus: f64,
    /// Rank sum of negative differences.
    pub w_minus: f64,
    /// `min(w_plus, w_minus)`.
    pub statistic: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub exact: bool,
    pub verdict: Verdict,
}

/// Which null distribution produces the p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PValueMethod {
    /// Exact up to [`EXACT_MAX_PAIRS`] pairs, normal approximation beyond.
    Auto,
    Exact,
    Normal,
}

/// Two-sided Wilcoxon signed-rank test on paired samples.
///
/// Zero differences are dropped and tied magnitudes share their average rank.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    wilcoxon_signed_rank_with(a, b, PValueMethod::Auto)
}

pub fn wilcoxon_signed_rank_with(
    a: &[f64],
    b: &[f64],
    method: PValueMethod,
) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let n = diffs.len();
    if n < MIN_PAIRS {
        return Err(Error::InsufficientPairs(n));
    }

    let ranks = average_ranks(&diffs);
    let (mut w_plus, mut w_minus) = (0.0, 0.0);
    for (d, r) in diffs.iter().zip(&ranks) {
        if *d > 0.0 {
            w_plus += r;
        } else {
            w_minus += r;
        }
    }
    let statistic = w_plus.min(w_minus);
    let exact = match method {
        PValueMethod::Auto => n <= EXACT_MAX_PAIRS,
        PValueMethod::Exact => true,
        PValueMethod::Normal => false,
    };
    let p_value = if exact {
        exact_p(&ranks, statistic)
    } else {
        normal_p(&ranks, w_plus)
    };
    let verdict = if p_value < SIGNIFICANCE && w_plus != w_minus {
        if w_plus < w_minus {
            Verdict::Improve
        } else {
            Verdict::Worsen
        }
    } else {
        Verdict::NoDifference
    };
    Ok(WilcoxonResult {
        n,
        w_plus,
        w_minus,
        statistic,
        p_value,
        exact,
        verdict,
    })
}

/// Ranks of `|d|`, 1-based, ties averaged.
fn average_ranks(diffs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..diffs.len()).collect();
    order.sort_by(|&i, &j| diffs[i].abs().total_cmp(&diffs[j].abs()));
    let mut ranks = vec![0.0; diffs.len()];
    let mut start = 0;
    while start < order.len() {
        let v = diffs[order[start]].abs();
        let mut end = start + 1;
        while end < order.len() && diffs[order[end]].abs() == v {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Exact two-sided p from the permutation distribution of the positive rank sum.
///
/// Ranks are multiples of one half, so doubled ranks are integers and the null
/// distribution is a subset-sum count over them.
fn exact_p(ranks: &[f64], statistic: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut ways = vec![0f64; total + 1];
    ways[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if ways[s] != 0.0 {
                ways[s + r] += ways[s];
            }
        }
        reach += r;
    }
    let threshold = (2.0 * statistic).round() as usize;
    let lower: f64 = ways[..=threshold].iter().sum();
    let p = 2.0 * lower / 2f64.powi(ranks.len() as i32);
    p.min(1.0)
}

/// Normal approximation with tie and continuity corrections.
fn normal_p(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end] == sorted[start] {
            end += 1;
        }
        let t = (end - start) as f64;
        tie_term += t * t * t - t;
        start = end;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}
