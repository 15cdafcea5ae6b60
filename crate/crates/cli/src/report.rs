//! Result files written by a run.
//!
//! | file            | contents |
//! |-----------------|----------|
//! | `records.csv`   | `corpus,theta,method,classifier,k,hl,size_pct`, one row per grid cell, full precision |
//! | `tables.csv`    | `theta,method,size_pct,<clf>_k<k>...,avg_k<k>...`: mean HL over corpora per classifier and k, plus the classifier average |
//! | `pareto.csv`    | `scenario,theta,classifier,k,method,hl,size_pct,frontier` |
//! | `wilcoxon.csv`  | `scenario,theta,classifier,k,method,baseline,objective,n,statistic,p_value,verdict` |
//! | `plots/*.csv`   | `method,size_pct,hl,frontier_flag`, one file per scenario and k |
//! | `manifest.json` | config hash, seeds, toolkit version, per-cell timings and errors |
//!
//! A scenario is either `classifier` (one classifier at one noise rate) or `noise`
//! (one noise rate, averaged over classifiers, `classifier` column `avg`). Table
//! and statistics files print floats with 6 significant digits.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use mlpg_core::evaluation::{
    aggregate, pareto_mask, wilcoxon_signed_rank, GroupField, ParetoPoint, WilcoxonResult,
};
use mlpg_core::{ClassifierKind, EvalRecord};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::runner::RunOutcome;

/// Methods the frontier is tested against.
pub const BASELINES: [&str; 2] = ["ALL", "MRHC"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Classifier,
    Noise,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Classifier => "classifier",
            ScenarioKind::Noise => "noise",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPoint {
    pub method: String,
    pub hl: f64,
    pub size_pct: f64,
    pub frontier: bool,
}

/// Method means for one scenario and k, with Pareto flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub theta: f64,
    /// `None` for noise scenarios (classifier average).
    pub classifier: Option<ClassifierKind>,
    pub k: usize,
    pub points: Vec<ScenarioPoint>,
}

impl Scenario {
    fn classifier_label(&self) -> &'static str {
        self.classifier.map_or("avg", ClassifierKind::as_str)
    }

    fn selects(&self, r: &EvalRecord) -> bool {
        r.theta.to_bits() == self.theta.to_bits()
            && r.k == self.k
            && self.classifier.is_none_or(|c| c == r.classifier)
    }

    /// File name of this scenario's plot series.
    pub fn plot_file_name(&self) -> String {
        format!(
            "{}_theta{}_{}_k{}.csv",
            self.kind.as_str(),
            self.theta,
            self.classifier_label(),
            self.k
        )
    }
}

fn unique<T: PartialEq + Copy>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for it in items {
        if !out.contains(&it) {
            out.push(it);
        }
    }
    out
}

fn build_scenario(
    kind: ScenarioKind,
    theta: f64,
    classifier: Option<ClassifierKind>,
    k: usize,
    records: &[EvalRecord],
) -> Scenario {
    let mut scenario = Scenario {
        kind,
        theta,
        classifier,
        k,
        points: Vec::new(),
    };
    let selected: Vec<EvalRecord> = records.iter().filter(|r| scenario.selects(r)).cloned().collect();
    let means = aggregate(&selected, &[GroupField::Method]);
    let pareto: Vec<ParetoPoint> = means
        .iter()
        .map(|g| ParetoPoint::new(g.key.method.clone().unwrap_or_default(), g.hl, g.size_pct))
        .collect();
    let mask = pareto_mask(&pareto);
    scenario.points = pareto
        .into_iter()
        .zip(mask)
        .map(|(p, frontier)| ScenarioPoint {
            method: p.id,
            hl: p.hl,
            size_pct: p.size_pct,
            frontier,
        })
        .collect();
    scenario
}

/// All scenarios present in `records`: per classifier, then per noise rate.
pub fn scenarios(records: &[EvalRecord]) -> Vec<Scenario> {
    let thetas = unique(records.iter().map(|r| r.theta.to_bits()));
    let classifiers = unique(records.iter().map(|r| r.classifier));
    let ks = unique(records.iter().map(|r| r.k));
    let mut out = Vec::new();
    for &t in &thetas {
        for &c in &classifiers {
            for &k in &ks {
                out.push(build_scenario(ScenarioKind::Classifier, f64::from_bits(t), Some(c), k, records));
            }
        }
    }
    for &t in &thetas {
        for &k in &ks {
            out.push(build_scenario(ScenarioKind::Noise, f64::from_bits(t), None, k, records));
        }
    }
    out.retain(|s| !s.points.is_empty());
    out
}

/// Per-scenario plot series, keyed by file name.
pub fn emit_plot_data(records: &[EvalRecord]) -> Vec<(String, String)> {
    scenarios(records)
        .iter()
        .map(|s| {
            let mut body = String::from("method,size_pct,hl,frontier_flag\n");
            for p in &s.points {
                let _ = writeln!(body, "{},{},{},{}", p.method, p.size_pct, p.hl, u8::from(p.frontier));
            }
            (s.plot_file_name(), body)
        })
        .collect()
}

/// Formats with 6 significant digits, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (5 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    s
}

pub fn records_csv(records: &[EvalRecord]) -> String {
    let mut out = String::from("corpus,theta,method,classifier,k,hl,size_pct\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.corpus, r.theta, r.method, r.classifier, r.k, r.hl, r.size_pct
        );
    }
    out
}

pub fn tables_csv(records: &[EvalRecord]) -> String {
    let thetas = unique(records.iter().map(|r| r.theta.to_bits()));
    let methods = unique(records.iter().map(|r| r.method.as_str()));
    let classifiers = unique(records.iter().map(|r| r.classifier));
    let ks = unique(records.iter().map(|r| r.k));

    let by_cell = aggregate(
        records,
        &[GroupField::Theta, GroupField::Method, GroupField::Classifier, GroupField::K],
    );
    let by_k = aggregate(records, &[GroupField::Theta, GroupField::Method, GroupField::K]);
    let by_method = aggregate(records, &[GroupField::Theta, GroupField::Method]);
    let lookup = |groups: &[mlpg_core::evaluation::GroupMean], t: u64, m: &str, c: Option<ClassifierKind>, k: Option<usize>| {
        groups
            .iter()
            .find(|g| {
                g.key.theta().map(f64::to_bits) == Some(t)
                    && g.key.method.as_deref() == Some(m)
                    && (c.is_none() || g.key.classifier == c)
                    && (k.is_none() || g.key.k == k)
            })
            .map(|g| (g.hl, g.size_pct))
    };

    let mut out = String::from("theta,method,size_pct");
    for c in &classifiers {
        for k in &ks {
            let _ = write!(out, ",{c}_k{k}");
        }
    }
    for k in &ks {
        let _ = write!(out, ",avg_k{k}");
    }
    out.push('\n');
    for &t in &thetas {
        for &m in &methods {
            let Some((_, size)) = lookup(&by_method, t, m, None, None) else {
                continue;
            };
            let _ = write!(out, "{},{},{}", f64::from_bits(t), m, sig6(size));
            for &c in &classifiers {
                for &k in &ks {
                    let cell = lookup(&by_cell, t, m, Some(c), Some(k));
                    let _ = write!(out, ",{}", cell.map(|v| sig6(v.0)).unwrap_or_default());
                }
            }
            for &k in &ks {
                let cell = lookup(&by_k, t, m, None, Some(k));
                let _ = write!(out, ",{}", cell.map(|v| sig6(v.0)).unwrap_or_default());
            }
            out.push('\n');
        }
    }
    out
}

pub fn pareto_csv(scenarios: &[Scenario]) -> String {
    let mut out = String::from("scenario,theta,classifier,k,method,hl,size_pct,frontier\n");
    for s in scenarios {
        for p in &s.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                s.kind.as_str(),
                s.theta,
                s.classifier_label(),
                s.k,
                p.method,
                sig6(p.hl),
                sig6(p.size_pct),
                u8::from(p.frontier)
            );
        }
    }
    out
}

/// Per-corpus (hl, size) of `method` within a scenario, averaging over classifiers
/// for noise scenarios.
fn per_corpus(records: &[EvalRecord], scenario: &Scenario, method: &str) -> HashMap<String, (f64, f64)> {
    let selected: Vec<EvalRecord> = records
        .iter()
        .filter(|r| r.method == method && scenario.selects(r))
        .cloned()
        .collect();
    aggregate(&selected, &[GroupField::Corpus])
        .into_iter()
        .map(|g| (g.key.corpus.unwrap_or_default(), (g.hl, g.size_pct)))
        .collect()
}

/// A frontier method tested against one baseline on one objective.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub scenario: ScenarioKind,
    pub theta: f64,
    pub classifier: Option<ClassifierKind>,
    pub k: usize,
    pub method: String,
    pub baseline: String,
    pub objective: &'static str,
    pub pairs: usize,
    pub result: Option<WilcoxonResult>,
}

pub fn comparisons(records: &[EvalRecord], scenarios: &[Scenario]) -> Vec<Comparison> {
    let corpora = unique(records.iter().map(|r| r.corpus.as_str()));
    let mut out = Vec::new();
    for s in scenarios {
        let present: Vec<&str> = s.points.iter().map(|p| p.method.as_str()).collect();
        for p in s.points.iter().filter(|p| p.frontier && !BASELINES.contains(&p.method.as_str())) {
            let mine = per_corpus(records, s, &p.method);
            for baseline in BASELINES.iter().filter(|b| present.contains(b)) {
                let theirs = per_corpus(records, s, baseline);
                let paired: Vec<((f64, f64), (f64, f64))> = corpora
                    .iter()
                    .filter_map(|c| Some((*mine.get(*c)?, *theirs.get(*c)?)))
                    .collect();
                for (objective, pick) in [("hl", 0usize), ("size", 1usize)] {
                    let get = |v: (f64, f64)| if pick == 0 { v.0 } else { v.1 };
                    let a: Vec<f64> = paired.iter().map(|(m, _)| get(*m)).collect();
                    let b: Vec<f64> = paired.iter().map(|(_, t)| get(*t)).collect();
                    out.push(Comparison {
                        scenario: s.kind,
                        theta: s.theta,
                        classifier: s.classifier,
                        k: s.k,
                        method: p.method.clone(),
                        baseline: baseline.to_string(),
                        objective,
                        pairs: paired.len(),
                        result: wilcoxon_signed_rank(&a, &b).ok(),
                    });
                }
            }
        }
    }
    out
}

pub fn wilcoxon_csv(comparisons: &[Comparison]) -> String {
    let mut out = String::from(
        "scenario,theta,classifier,k,method,baseline,objective,n,statistic,p_value,verdict\n",
    );
    for c in comparisons {
        let (n, stat, p, verdict) = match &c.result {
            Some(r) => (r.n, sig6(r.statistic), sig6(r.p_value), r.verdict.as_str()),
            None => (c.pairs, String::new(), String::new(), "insufficient_pairs"),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.scenario.as_str(),
            c.theta,
            c.classifier.map_or("avg", ClassifierKind::as_str),
            c.k,
            c.method,
            c.baseline,
            c.objective,
            n,
            stat,
            p,
            verdict
        );
    }
    out
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    toolkit_version: &'static str,
    config_hash: String,
    seed: u64,
    jobs: Option<usize>,
    noise_seeds: &'a [crate::runner::NoiseSeed],
    cells: &'a [crate::runner::CellTiming],
    errors: &'a [crate::runner::CellError],
    records: usize,
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(config.canonical_json().as_bytes()))
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

/// Writes every result file into `out_dir`.
pub fn write_all(
    out_dir: &Path,
    config: &ExperimentConfig,
    outcome: &RunOutcome,
    jobs: Option<usize>,
) -> Result<()> {
    let plots = out_dir.join("plots");
    fs::create_dir_all(&plots).with_context(|| format!("creating {}", plots.display()))?;
    let records = &outcome.records;
    let scenarios = scenarios(records);
    write(&out_dir.join("records.csv"), &records_csv(records))?;
    write(&out_dir.join("tables.csv"), &tables_csv(records))?;
    write(&out_dir.join("pareto.csv"), &pareto_csv(&scenarios))?;
    write(&out_dir.join("wilcoxon.csv"), &wilcoxon_csv(&comparisons(records, &scenarios)))?;
    for (name, body) in emit_plot_data(records) {
        write(&plots.join(name), &body)?;
    }
    let manifest = Manifest {
        toolkit_version: env!("CARGO_PKG_VERSION"),
        config_hash: config_hash(config),
        seed: config.seed,
        jobs,
        noise_seeds: &outcome.noise_seeds,
        cells: &outcome.timings,
        errors: &outcome.errors,
        records: records.len(),
    };
    write(
        &out_dir.join("manifest.json"),
        &serde_json::to_string_pretty(&manifest)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(method: &str, corpus: &str, hl: f64, size: f64) -> EvalRecord {
        EvalRecord {
            method: method.into(),
            corpus: corpus.into(),
            theta: 0.0,
            classifier: ClassifierKind::Br,
            k: 1,
            hl,
            size_pct: size,
        }
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(sig6(0.0909), "0.0909");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(100.0), "100");
        assert_eq!(sig6(59.62), "59.62");
        assert_eq!(sig6(9.9999996), "10");
        assert_eq!(sig6(1234567.0), "1234567");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn single_record_plot() {
        let plots = emit_plot_data(&[rec("ALL", "a", 0.1, 100.0)]);
        // one classifier scenario and one noise scenario
        assert_eq!(plots.len(), 2);
        assert_eq!(plots[0].1, "method,size_pct,hl,frontier_flag\nALL,100,0.1,1\n");
    }

    #[test]
    fn published_triple_flags() {
        let rs = vec![
            rec("ALL", "a", 9.09, 100.0),
            rec("MRHC", "a", 8.76, 59.62),
            rec("MChen_10", "a", 7.92, 9.98),
        ];
        let s = &scenarios(&rs)[0];
        let flags: Vec<(&str, bool)> = s.points.iter().map(|p| (p.method.as_str(), p.frontier)).collect();
        assert_eq!(flags, vec![("ALL", false), ("MRHC", false), ("MChen_10", true)]);
    }

    #[test]
    fn tables_layout() {
        let rs = vec![rec("ALL", "a", 0.08, 100.0), rec("ALL", "b", 0.10, 100.0)];
        assert_eq!(tables_csv(&rs), "theta,method,size_pct,br_k1,avg_k1\n0,ALL,100,0.09,0.09\n");
    }

    #[test]
    fn wilcoxon_rows_need_pairs() {
        let rs = vec![
            rec("ALL", "a", 0.2, 100.0),
            rec("MChen_10", "a", 0.1, 10.0),
        ];
        let sc = scenarios(&rs);
        let cmp = comparisons(&rs, &sc);
        assert_eq!(cmp.len(), 4); // two objectives in each of the two scenarios
        assert!(cmp.iter().all(|c| c.result.is_none() && c.pairs == 1));
        assert!(wilcoxon_csv(&cmp).contains("insufficient_pairs"));
    }
}
