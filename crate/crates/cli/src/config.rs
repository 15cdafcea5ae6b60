//! Experiment configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//! methods = ["all", "mrhc", "mchen_10", "mrsp1_30", "mrsp3"]
//! thetas = [0.0, 0.2, 0.4]
//! classifiers = ["br", "lp", "mlknn"]
//! ks = [1, 3, 5, 7]
//!
//! [[corpora]]
//! name = "emotions"
//! train = { path = "emotions-train.arff", xml = "emotions.xml", format = "arff" }
//! test = { path = "emotions-test.arff", xml = "emotions.xml", format = "arff" }
//!
//! [[corpora]]
//! name = "blobs"
//! test_n = 200
//! synthetic = { n = 400, f = 4, labels = 6, clusters = 8, noise_sigma = 1.5, seed = 1 }
//! ```

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mlpg_core::corpus::{gen_synthetic_split, CorpusSource, SyntheticSpec};
use mlpg_core::{ClassifierKind, MultilabelDataset, ReducerSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub corpora: Vec<CorpusEntry>,
    pub methods: Vec<ReducerSpec>,
    #[serde(default = "default_thetas")]
    pub thetas: Vec<f64>,
    #[serde(default = "default_classifiers")]
    pub classifiers: Vec<ClassifierKind>,
    #[serde(default = "default_ks")]
    pub ks: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn default_thetas() -> Vec<f64> {
    vec![0.0, 0.2, 0.4]
}

fn default_classifiers() -> Vec<ClassifierKind> {
    ClassifierKind::ALL.to_vec()
}

fn default_ks() -> Vec<usize> {
    vec![1, 3, 5, 7]
}

/// A corpus with its fixed train/test partition, either on disk or synthetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train: Option<CorpusSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<CorpusSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_n: Option<usize>,
}

impl CorpusEntry {
    pub fn files(name: impl Into<String>, train: CorpusSource, test: CorpusSource) -> Self {
        CorpusEntry {
            name: name.into(),
            train: Some(train),
            test: Some(test),
            synthetic: None,
            test_n: None,
        }
    }

    pub fn synthetic(name: impl Into<String>, spec: SyntheticSpec, test_n: usize) -> Self {
        CorpusEntry {
            name: name.into(),
            train: None,
            test: None,
            synthetic: Some(spec),
            test_n: Some(test_n),
        }
    }

    fn validate(&self) -> Result<()> {
        match (&self.train, &self.test, &self.synthetic) {
            (Some(_), Some(_), None) if self.test_n.is_none() => Ok(()),
            (None, None, Some(_)) if self.test_n.is_some_and(|n| n > 0) => Ok(()),
            _ => bail!(
                "corpus {:?}: give either train and test sources, or synthetic with a positive test_n",
                self.name
            ),
        }
    }

    /// Loads (or generates) the train and test partitions.
    pub fn load(&self) -> Result<(MultilabelDataset, MultilabelDataset)> {
        if let Some(spec) = &self.synthetic {
            let test_n = self.test_n.unwrap_or(0);
            return gen_synthetic_split(spec, test_n)
                .with_context(|| format!("generating corpus {:?}", self.name));
        }
        let (Some(train), Some(test)) = (&self.train, &self.test) else {
            bail!("corpus {:?} has no sources", self.name);
        };
        let train = train
            .load()
            .with_context(|| format!("loading train split of {:?}", self.name))?;
        let test = test
            .load()
            .with_context(|| format!("loading test split of {:?}", self.name))?;
        if train.n_features() != test.n_features() || train.label_count() != test.label_count() {
            bail!(
                "corpus {:?}: train has f={} L={}, test has f={} L={}",
                self.name,
                train.n_features(),
                train.label_count(),
                test.n_features(),
                test.label_count()
            );
        }
        Ok((train, test))
    }
}

impl ExperimentConfig {
    /// Reads a TOML config; relative corpus paths resolve against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config: ExperimentConfig =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for c in &mut config.corpora {
            c.train = c.train.take().map(|s| s.relative_to(base));
            c.test = c.test.take().map(|s| s.relative_to(base));
        }
        if let Some(out) = &config.output {
            if out.is_relative() {
                config.output = Some(base.join(out));
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.corpora.is_empty() {
            bail!("config lists no corpora");
        }
        if self.methods.is_empty() {
            bail!("config lists no methods");
        }
        if self.thetas.is_empty() || self.classifiers.is_empty() || self.ks.is_empty() {
            bail!("thetas, classifiers and ks must be non-empty");
        }
        if let Some(t) = self.thetas.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            bail!("noise rate {t} outside [0, 1]");
        }
        if self.ks.contains(&0) {
            bail!("k must be positive");
        }
        let mut names = HashSet::new();
        for c in &self.corpora {
            c.validate()?;
            if !names.insert(c.name.as_str()) {
                bail!("duplicate corpus name {:?}", c.name);
            }
        }
        let mut methods = HashSet::new();
        for m in &self.methods {
            if !methods.insert(m) {
                bail!("duplicate method {m}");
            }
        }
        Ok(())
    }

    /// Canonical JSON rendering, the input to the manifest's config hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
