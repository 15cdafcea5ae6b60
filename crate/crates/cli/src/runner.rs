//! Grid execution: for every corpus, noise rate and method, the training split is
//! corrupted, reduced, and used as the reference set of each classifier and k.

use std::time::Instant;

use anyhow::{Context, Result};
use mlpg_core::evaluation::hamming_loss;
use mlpg_core::{
    induce_noise, reduce, Classifier, ClassifierKind, EvalRecord, MultilabelDataset, NoiseSpec,
    ReducerSpec,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Serialize)]
pub struct CellTiming {
    pub corpus: String,
    pub theta: f64,
    pub method: String,
    pub millis: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellError {
    pub corpus: String,
    pub theta: Option<f64>,
    pub method: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoiseSeed {
    pub corpus: String,
    pub theta: f64,
    pub seed: u64,
}

/// Everything a run produces before serialization. Records are in canonical
/// order: corpus, noise rate, method, classifier, k, each as listed in the config.
#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    pub records: Vec<EvalRecord>,
    pub timings: Vec<CellTiming>,
    pub errors: Vec<CellError>,
    pub noise_seeds: Vec<NoiseSeed>,
}

/// Seed of the noise stream for one (corpus, noise rate) pair, shared by all methods
/// so they see the same corrupted training set.
pub fn noise_seed(base: u64, corpus_index: usize, theta_index: usize) -> u64 {
    splitmix64(splitmix64(base ^ splitmix64(corpus_index as u64)) ^ theta_index as u64)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hamming loss of one classifier over `test` with `reference` as its reference set.
pub fn evaluate_reference(
    reference: &MultilabelDataset,
    test: &MultilabelDataset,
    classifier: ClassifierKind,
    k: usize,
) -> Result<f64> {
    let model = Classifier::fit(classifier, reference, k)?;
    let predictions = model.predict_all(test)?;
    Ok(hamming_loss(test.labelsets(), &predictions, test.label_count())?)
}

/// Runs one grid cell: noise, then reduction, then every classifier and k.
///
/// A k larger than the reduced set allows is lowered to the largest usable value;
/// the record keeps the requested k.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_cell(
    corpus: &str,
    train: &MultilabelDataset,
    test: &MultilabelDataset,
    theta: f64,
    seed: u64,
    method: &ReducerSpec,
    classifiers: &[ClassifierKind],
    ks: &[usize],
) -> Result<Vec<EvalRecord>> {
    let noisy = induce_noise(train, &NoiseSpec::new(theta, seed)?)?;
    let reduction = reduce(method, &noisy)?;
    let reference = &reduction.reduced;
    let mut out = Vec::with_capacity(classifiers.len() * ks.len());
    for &classifier in classifiers {
        for &k in ks {
            let usable = k.min(classifier.max_k(reference.len()));
            anyhow::ensure!(
                usable > 0,
                "reduced set of {} instances is too small for {classifier}",
                reference.len()
            );
            let hl = evaluate_reference(reference, test, classifier, usable)?;
            out.push(EvalRecord {
                method: method.to_string(),
                corpus: corpus.to_string(),
                theta,
                classifier,
                k,
                hl,
                size_pct: reduction.size_pct,
            });
        }
    }
    Ok(out)
}

/// Executes the whole grid. Corpus and cell failures are collected, not fatal.
pub fn execute(config: &ExperimentConfig, jobs: Option<usize>) -> Result<RunOutcome> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    pool.install(|| execute_in_pool(config))
}

fn execute_in_pool(config: &ExperimentConfig) -> Result<RunOutcome> {
    let mut outcome = RunOutcome::default();
    let loaded: Vec<_> = config.corpora.par_iter().map(|c| c.load()).collect();
    let mut corpora = Vec::new();
    for (ci, (entry, data)) in config.corpora.iter().zip(loaded).enumerate() {
        match data {
            Ok((train, test)) => corpora.push((ci, entry.name.as_str(), train, test)),
            Err(e) => outcome.errors.push(CellError {
                corpus: entry.name.clone(),
                theta: None,
                method: None,
                error: format!("{e:#}"),
            }),
        }
    }

    let mut cells = Vec::new();
    for (slot, (ci, name, _, _)) in corpora.iter().enumerate() {
        for (ti, &theta) in config.thetas.iter().enumerate() {
            let seed = noise_seed(config.seed, *ci, ti);
            outcome.noise_seeds.push(NoiseSeed {
                corpus: name.to_string(),
                theta,
                seed,
            });
            for method in &config.methods {
                cells.push((slot, theta, seed, method));
            }
        }
    }

    let results: Vec<_> = cells
        .par_iter()
        .map(|&(slot, theta, seed, method)| {
            let (_, name, train, test) = &corpora[slot];
            let start = Instant::now();
            let result = evaluate_cell(
                name,
                train,
                test,
                theta,
                seed,
                method,
                &config.classifiers,
                &config.ks,
            );
            (result, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();

    for (&(slot, theta, _, method), (result, millis)) in cells.iter().zip(results) {
        let name = corpora[slot].1.to_string();
        outcome.timings.push(CellTiming {
            corpus: name.clone(),
            theta,
            method: method.to_string(),
            millis,
        });
        match result {
            Ok(records) => outcome.records.extend(records),
            Err(e) => outcome.errors.push(CellError {
                corpus: name,
                theta: Some(theta),
                method: Some(method.to_string()),
                error: format!("{e:#}"),
            }),
        }
    }
    Ok(outcome)
}
