//! Metrics, Pareto analysis and significance testing for reduction experiments.

mod aggregate;
mod pareto;
mod wilcoxon;

pub use aggregate::{aggregate, EvalRecord, GroupField, GroupKey, GroupMean};
pub use pareto::{dominates, pareto_front, pareto_mask, ParetoPoint};
pub use wilcoxon::{
    wilcoxon_signed_rank, wilcoxon_signed_rank_with, PValueMethod, Verdict, WilcoxonResult,
    EXACT_MAX_PAIRS, SIGNIFICANCE,
};

use crate::error::{Error, Result};
use crate::mldata::Labelset;

/// Mean fraction of mispredicted labels over `label_count` labels.
pub fn hamming_loss(truth: &[Labelset], pred: &[Labelset], label_count: usize) -> Result<f64> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::InvalidParameter("hamming loss over zero instances".into()));
    }
    if label_count == 0 {
        return Err(Error::InvalidParameter("label count must be at least 1".into()));
    }
    let wrong: usize = truth
        .iter()
        .zip(pred)
        .map(|(y, p)| y.symmetric_difference_len(p))
        .sum();
    Ok(wrong as f64 / (truth.len() as f64 * label_count as f64))
}
