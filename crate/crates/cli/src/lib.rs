//! Experiment grid runner for multilabel prototype generation.

pub mod config;
pub mod report;
pub mod runner;

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub use config::{CorpusEntry, ExperimentConfig};
pub use runner::{execute, RunOutcome};

/// Runs the grid and writes every result file into `out_dir`.
pub fn run(config: &ExperimentConfig, out_dir: &Path, jobs: Option<usize>) -> Result<RunOutcome> {
    if config.methods.is_empty() {
        bail!("config lists no methods");
    }
    let outcome = execute(config, jobs)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    report::write_all(out_dir, config, &outcome, jobs)?;
    Ok(outcome)
}
