//! The `sememe` command-line pipeline: prepare, train, predict, eval, analyze, synth.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

mod commands;
pub mod config;

use config::{ConfigError, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "sememe",
    version,
    about = "Sememe prediction for multilingual synsets"
)]
pub struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Global seed for splitting, training and generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override one config key; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Worker threads (0 = all cores; 1 forces deterministic training).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter and split a triplet file into train/valid/test.
    Prepare(PrepareArgs),
    /// Train relational embeddings on the train split.
    Train(TrainArgs),
    /// Rank sememes for the held-out synsets.
    Predict(PredictArgs),
    /// MAP/F1 report for one or more prediction dumps.
    Eval(EvalArgs),
    /// Bucketed metrics and per-sememe difficulty.
    Analyze(AnalyzeArgs),
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output directory (created if missing).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Split export written by `prepare`.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// POS tags (`id<TAB>tag`).
    #[arg(long)]
    pub pos: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    #[arg(long)]
    pub triplets: Option<PathBuf>,
    #[arg(long)]
    pub pos: Option<PathBuf>,
    /// Train,valid,test ratios, e.g. `0.8,0.1,0.1`.
    #[arg(long)]
    pub ratios: Option<String>,
    /// Keep only synsets with these POS tags, e.g. `noun`.
    #[arg(long)]
    pub keep_pos: Option<String>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Drop the equivalence term (λ2 = 0).
    #[arg(long)]
    pub transe: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Embedding snapshot from `train`.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Per-synset semantic vectors.
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    /// fused, rr or sr.
    #[arg(long)]
    pub mode: Option<String>,
    /// Split whose synsets are predicted.
    #[arg(long)]
    pub split: Option<String>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// `NAME=FILE` prediction dump; may be repeated.
    #[arg(long = "predictions", value_name = "NAME=FILE")]
    pub predictions: Vec<String>,
    #[arg(long)]
    pub split: Option<String>,
    /// macro or micro.
    #[arg(long)]
    pub f1: Option<String>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    #[arg(long)]
    pub split: Option<String>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub synsets: Option<usize>,
    #[arg(long)]
    pub sememes: Option<usize>,
    #[arg(long)]
    pub noise: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

fn path(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Prepare(_) => "prepare",
            Command::Train(_) => "train",
            Command::Predict(_) => "predict",
            Command::Eval(_) => "eval",
            Command::Analyze(_) => "analyze",
            Command::Synth(_) => "synth",
        }
    }

    /// Command flags as config assignments; these win over every other source.
    fn overrides(&self) -> Vec<(&'static str, Option<String>)> {
        let data = |d: &DataArgs| {
            vec![
                ("input.dataset", path(&d.dataset)),
                ("input.pos", path(&d.pos)),
            ]
        };
        let out = |o: &OutArg| ("output.dir", path(&o.out));
        match self {
            Command::Prepare(a) => vec![
                ("input.triplets", path(&a.triplets)),
                ("input.pos", path(&a.pos)),
                ("prepare.ratios", a.ratios.clone()),
                ("prepare.pos", a.keep_pos.clone()),
                out(&a.out),
            ],
            Command::Train(a) => {
                let mut v = data(&a.data);
                v.extend([
                    ("train.epochs", a.epochs.map(|x| x.to_string())),
                    ("train.dim", a.dim.map(|x| x.to_string())),
                    ("train.lambda2", a.transe.then(|| "0".to_string())),
                    out(&a.out),
                ]);
                v
            }
            Command::Predict(a) => {
                let mut v = data(&a.data);
                v.extend([
                    ("input.embeddings", path(&a.embeddings)),
                    ("input.vectors", path(&a.vectors)),
                    ("predict.mode", a.mode.clone()),
                    ("predict.split", a.split.clone()),
                    out(&a.out),
                ]);
                v
            }
            Command::Eval(a) => {
                let mut v = data(&a.data);
                v.extend([
                    ("predict.split", a.split.clone()),
                    ("eval.f1", a.f1.clone()),
                    out(&a.out),
                ]);
                v
            }
            Command::Analyze(a) => {
                let mut v = data(&a.data);
                v.extend([
                    ("input.predictions", path(&a.predictions)),
                    ("predict.split", a.split.clone()),
                    out(&a.out),
                ]);
                v
            }
            Command::Synth(a) => vec![
                ("synth.n_synsets", a.synsets.map(|x| x.to_string())),
                ("synth.n_sememes", a.sememes.map(|x| x.to_string())),
                ("synth.noise", a.noise.map(|x| x.to_string())),
                out(&a.out),
            ],
        }
    }
}

/// Resolves the configuration: defaults, file, environment, `--set`, flags.
pub fn resolve_config(
    cli: &Cli,
    env: impl IntoIterator<Item = (String, String)>,
) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    if let Some(file) = &cli.config {
        config.apply_file(file)?;
    }
    config.apply_env(env)?;
    for assignment in &cli.set {
        config.apply_assignment(assignment)?;
    }
    if let Some(seed) = cli.seed {
        config.set("seed", &seed.to_string())?;
    }
    if let Some(threads) = cli.threads {
        config.set("threads", &threads.to_string())?;
    }
    for (key, value) in cli.command.overrides() {
        if let Some(value) = value {
            config.set(key, &value)?;
        }
    }
    if config.threads == 1 {
        config.train.deterministic = true;
    }
    config.validate()?;
    Ok(config)
}

/// 1 for usage and configuration problems, 2 for everything else.
pub fn exit_code(error: &anyhow::Error) -> i32 {
    let config = error.chain().any(|c| {
        c.downcast_ref::<ConfigError>().is_some()
            || c.downcast_ref::<sememe_core::Error>()
                .is_some_and(sememe_core::Error::is_config)
    });
    if config {
        1
    } else {
        2
    }
}

pub fn execute(cli: Cli, env: impl IntoIterator<Item = (String, String)>) -> Result<()> {
    let config = resolve_config(&cli, env)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .context("building the worker pool")?;
    pool.install(|| commands::dispatch(&cli, &config))
}

/// Parses `args` (including the program name) and runs the command, returning the exit code.
pub fn run_with_env<I, T>(args: I, env: impl IntoIterator<Item = (String, String)>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli, env) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::vars())
}
