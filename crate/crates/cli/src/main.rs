use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use mlpg_cli::{run, ExperimentConfig};
use mlpg_core::corpus::{gen_synthetic, save_csv, CorpusSource, SyntheticSpec};
use mlpg_core::{describe, induce_noise, reduce, MultilabelDataset, NoiseSpec, ReducerSpec};

#[derive(Parser)]
#[command(name = "mlpg", version, about = "Multilabel prototype generation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CorpusArgs {
    /// ARFF or CSV file (format chosen by extension)
    #[arg(long)]
    corpus: PathBuf,
    /// MULAN label XML for ARFF input
    #[arg(long)]
    xml: Option<PathBuf>,
    /// Number of trailing label attributes for ARFF input
    #[arg(long)]
    label_count: Option<usize>,
}

impl CorpusArgs {
    fn load(&self) -> Result<MultilabelDataset> {
        CorpusSource::infer(&self.corpus, self.xml.clone(), self.label_count)
            .load()
            .with_context(|| format!("loading {}", self.corpus.display()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid from a TOML config
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the config's `output`
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print size, dimensionality, label cardinality and density
    Describe {
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Reduce a corpus and write the prototypes as CSV
    Reduce {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// ALL, MRHC, MChen, MRSP1, MRSP2 or MRSP3 (optionally with `_<m>`)
        #[arg(long)]
        method: String,
        /// Reduction parameter in percent
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Swap labelsets of a fraction of instances and write the result as CSV
    Noise {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a Gaussian-blob corpus as CSV
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        labels: usize,
        #[arg(long)]
        clusters: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_method(tag: &str, m: Option<u32>) -> Result<ReducerSpec> {
    let has_suffix = tag.contains(['_', ':']);
    let spec: ReducerSpec = match m {
        Some(m) if !has_suffix => format!("{tag}_{m}").parse()?,
        Some(m) => {
            let spec: ReducerSpec = tag.parse()?;
            if spec.m() != Some(m) {
                anyhow::bail!("conflicting reduction parameters in `{tag}` and --m {m}");
            }
            spec
        }
        None => tag.parse()?,
    };
    Ok(spec)
}

fn write_csv(ds: &MultilabelDataset, out: &Path) -> Result<()> {
    save_csv(ds, out).with_context(|| format!("writing {}", out.display()))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, seed, jobs } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out = out
                .or_else(|| cfg.output.clone())
                .unwrap_or_else(|| PathBuf::from("results"));
            let outcome = run(&cfg, &out, jobs)?;
            println!(
                "{} records, {} errors -> {}",
                outcome.records.len(),
                outcome.errors.len(),
                out.display()
            );
            for e in &outcome.errors {
                eprintln!("error: {} {:?} {:?}: {}", e.corpus, e.theta, e.method, e.error);
            }
        }
        Command::Describe { corpus } => {
            println!("{}", describe(&corpus.load()?)?);
        }
        Command::Reduce { corpus, method, m, out } => {
            let spec = parse_method(&method, m)?;
            let result = reduce(&spec, &corpus.load()?)?;
            write_csv(&result.reduced, &out)?;
            println!("{spec}: {} prototypes ({:.2}%)", result.reduced.len(), result.size_pct);
        }
        Command::Noise { corpus, theta, seed, out } => {
            let noisy = induce_noise(&corpus.load()?, &NoiseSpec::new(theta, seed)?)?;
            write_csv(&noisy, &out)?;
        }
        Command::Synth { n, f, labels, clusters, sigma, seed, out } => {
            let ds = gen_synthetic(&SyntheticSpec::new(n, f, labels, clusters, sigma, seed))?;
            write_csv(&ds, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
