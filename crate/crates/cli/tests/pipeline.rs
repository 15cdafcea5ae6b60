use std::fs;
use std::path::Path;
use std::process::Command;

use mlpg_cli::config::{CorpusEntry, ExperimentConfig};
use mlpg_cli::runner::{evaluate_cell, evaluate_reference};
use mlpg_cli::{execute, run};
use mlpg_core::corpus::{gen_synthetic_split, CorpusSource, SyntheticSpec};
use mlpg_core::evaluation::{aggregate, pareto_front, GroupField};
use mlpg_core::{induce_noise, reduce, ClassifierKind, NoiseSpec, ParetoPoint, ReducerSpec};

fn methods(tags: &[&str]) -> Vec<ReducerSpec> {
    tags.iter().map(|t| t.parse().unwrap()).collect()
}

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        corpora: vec![
            CorpusEntry::synthetic("a", SyntheticSpec::new(120, 3, 5, 6, 1.5, 1), 60),
            CorpusEntry::synthetic("b", SyntheticSpec::new(150, 2, 4, 5, 2.0, 2), 60),
        ],
        methods: methods(&["all", "mrhc", "mchen_10", "mrsp1_30", "mrsp2_30", "mrsp3"]),
        thetas: vec![0.0, 0.2, 0.4],
        classifiers: ClassifierKind::ALL.to_vec(),
        ks: vec![1, 3, 5, 7],
        seed: 11,
        output: None,
    }
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn grid_size_and_canonical_order() {
    let cfg = small_config();
    let outcome = execute(&cfg, Some(3)).unwrap();
    assert!(outcome.errors.is_empty(), "{:?}", outcome.errors);
    assert_eq!(outcome.records.len(), 2 * 3 * 6 * 3 * 4);
    let first = &outcome.records[0];
    assert_eq!((first.corpus.as_str(), first.theta, first.method.as_str(), first.k), ("a", 0.0, "ALL", 1));
    let last = outcome.records.last().unwrap();
    assert_eq!((last.corpus.as_str(), last.theta, last.method.as_str(), last.k), ("b", 0.4, "MRSP3", 7));
    assert!(outcome.records.iter().filter(|r| r.method == "ALL").all(|r| r.size_pct == 100.0));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let cfg = small_config();
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(&cfg, d1.path(), Some(1)).unwrap();
    run(&cfg, d2.path(), Some(4)).unwrap();
    for name in ["records.csv", "tables.csv", "pareto.csv", "wilcoxon.csv"] {
        assert_eq!(read(d1.path(), name), read(d2.path(), name), "{name}");
    }
    let plots: Vec<_> = fs::read_dir(d1.path().join("plots")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert!(!plots.is_empty());
    for p in plots {
        let p = Path::new("plots").join(p);
        assert_eq!(read(d1.path(), p.to_str().unwrap()), read(d2.path(), p.to_str().unwrap()));
    }
    let manifest: serde_json::Value = serde_json::from_str(&read(d1.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["cells"].as_array().unwrap().len(), 2 * 3 * 6);
}

#[test]
fn different_seed_changes_noisy_cells_only() {
    let mut cfg = small_config();
    let a = execute(&cfg, None).unwrap().records;
    cfg.seed = 12;
    let b = execute(&cfg, None).unwrap().records;
    for (x, y) in a.iter().zip(&b) {
        if x.theta == 0.0 {
            assert_eq!(x, y);
        }
    }
    assert!(a.iter().zip(&b).any(|(x, y)| x.hl != y.hl));
}

#[test]
fn pareto_flags_match_recomputation() {
    let cfg = small_config();
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&cfg, dir.path(), None).unwrap();
    let pareto = read(dir.path(), "pareto.csv");
    let mut checked = 0;
    for theta in &cfg.thetas {
        for c in &cfg.classifiers {
            for k in &cfg.ks {
                let subset: Vec<_> = outcome
                    .records
                    .iter()
                    .filter(|r| r.theta == *theta && r.classifier == *c && r.k == *k)
                    .cloned()
                    .collect();
                let points: Vec<ParetoPoint> = aggregate(&subset, &[GroupField::Method])
                    .into_iter()
                    .map(|g| ParetoPoint::new(g.key.method.unwrap(), g.hl, g.size_pct))
                    .collect();
                let front: Vec<String> = pareto_front(&points).into_iter().map(|p| p.id).collect();
                let prefix = format!("classifier,{theta},{c},{k},");
                let flagged: Vec<String> = pareto
                    .lines()
                    .filter(|l| l.starts_with(&prefix) && l.ends_with(",1"))
                    .map(|l| l.split(',').nth(4).unwrap().to_string())
                    .collect();
                assert_eq!(front, flagged, "{prefix}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 36);
    let body = read(dir.path(), "plots/classifier_theta0_br_k1.csv");
    assert!(body.starts_with("method,size_pct,hl,frontier_flag\nALL,100,"));
}

#[test]
fn noise_is_applied_before_reduction() {
    // MChen_10 on 60 instances keeps 6 prototypes; 40 % noise on those would swap
    // only 2 labelsets, while noise on the training set swaps 24.
    let spec = SyntheticSpec::new(60, 2, 5, 6, 0.5, 3);
    let (train, test) = gen_synthetic_split(&spec, 60).unwrap();
    let method: ReducerSpec = "mchen_10".parse().unwrap();
    let seed = 5;
    let pipeline = evaluate_cell("c", &train, &test, 0.4, seed, &method, &[ClassifierKind::Lp], &[1]).unwrap();
    let reduced_first = reduce(&method, &train).unwrap().reduced;
    let swapped = induce_noise(&reduced_first, &NoiseSpec::new(0.4, seed).unwrap()).unwrap();
    let reordered = evaluate_reference(&swapped, &test, ClassifierKind::Lp, 1).unwrap();
    assert_ne!(pipeline[0].hl, reordered);
}

#[test]
fn broken_corpus_is_recorded_and_run_continues() {
    let mut cfg = small_config();
    cfg.corpora.push(CorpusEntry::files(
        "missing",
        CorpusSource::csv("/nonexistent/train.csv"),
        CorpusSource::csv("/nonexistent/test.csv"),
    ));
    let outcome = execute(&cfg, None).unwrap();
    assert_eq!(outcome.errors.len(), 1);
    assert_eq!(outcome.errors[0].corpus, "missing");
    assert_eq!(outcome.records.len(), 2 * 3 * 6 * 3 * 4);
}

#[test]
fn empty_method_list_is_rejected() {
    let mut cfg = small_config();
    cfg.methods.clear();
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&cfg, dir.path(), None).is_err());
}

fn mlpg(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mlpg")).args(args).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.success(), text)
}

#[test]
fn command_line_tools() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    let (ok, _) = mlpg(&["synth", "--n", "200", "--f", "3", "--labels", "4", "--clusters", "5", "--seed", "9", "--out", &p("s.csv")]);
    assert!(ok);
    let (ok, text) = mlpg(&["describe", "--corpus", &p("s.csv")]);
    assert!(ok && text.contains("n=200 f=3 L=4"), "{text}");

    let (ok, text) = mlpg(&["reduce", "--corpus", &p("s.csv"), "--method", "mchen", "--m", "10", "--out", &p("r.csv")]);
    assert!(ok && text.contains("MChen_10: 20 prototypes"), "{text}");
    let (ok, text) = mlpg(&["describe", "--corpus", &p("r.csv")]);
    assert!(ok && text.contains("n=20 f=3 L=4"), "{text}");

    let (ok, _) = mlpg(&["noise", "--corpus", &p("s.csv"), "--theta", "0.2", "--seed", "1", "--out", &p("n.csv")]);
    assert!(ok);
    assert_ne!(fs::read(p("s.csv")).unwrap(), fs::read(p("n.csv")).unwrap());

    let (ok, text) = mlpg(&["reduce", "--corpus", &p("s.csv"), "--method", "mchen", "--out", &p("x.csv")]);
    assert!(!ok && text.contains("error"), "{text}");

    let config = "methods = [\"all\", \"mchen_30\"]\nthetas = [0.0]\nks = [1]\n\n[[corpora]]\nname = \"s\"\ntrain = { path = \"s.csv\", format = \"csv\" }\ntest = { path = \"n.csv\", format = \"csv\" }\n";
    fs::write(p("exp.toml"), config).unwrap();
    let (ok, text) = mlpg(&["run", "--config", &p("exp.toml"), "--out", &p("res"), "--seed", "4", "--jobs", "2"]);
    assert!(ok, "{text}");
    assert_eq!(read(&dir.path().join("res"), "records.csv").lines().count(), 1 + 2 * 3);
}

#[test]
fn shipped_config_parses() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/blobs.toml");
    let cfg = ExperimentConfig::from_file(&path).unwrap();
    cfg.validate().unwrap();
    assert_eq!(cfg.corpora.len(), 3);
}
