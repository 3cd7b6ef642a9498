//! Flat `key = value` run configuration.
//!
//! Values are resolved in increasing priority: built-in defaults, the config
//! file, `SEMEME_*` environment variables, `--set key=value`, dedicated flags.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sememe_core::eval::{BucketQuantity, BucketSpec, F1Mode};
use sememe_core::kge::{Corruption, TrainConfig};
use sememe_core::{FusionConfig, Pos, ScoreMode, Split, SrConfig, SynthConfig};

pub const ENV_PREFIX: &str = "SEMEME_";

/// A usage or configuration problem; maps to exit code 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

macro_rules! config_err {
    ($($arg:tt)*) => { ConfigError(format!($($arg)*)) };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictMode {
    Fused,
    Rr,
    Sr,
}

impl FromStr for PredictMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fused" => Ok(PredictMode::Fused),
            "rr" => Ok(PredictMode::Rr),
            "sr" => Ok(PredictMode::Sr),
            other => Err(format!("unknown mode {other:?} (expected fused, rr or sr)")),
        }
    }
}

impl fmt::Display for PredictMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictMode::Fused => "fused",
            PredictMode::Rr => "rr",
            PredictMode::Sr => "sr",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads; 0 uses all cores, 1 forces deterministic training.
    pub threads: usize,
    pub output_dir: PathBuf,

    pub triplets: Option<PathBuf>,
    pub pos: Option<PathBuf>,
    pub vectors: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub predictions: Option<PathBuf>,

    pub ratios: (f64, f64, f64),
    pub min_node_degree: usize,
    pub min_relation_count: usize,
    pub keep_pos: Option<BTreeSet<Pos>>,

    pub train: TrainConfig,
    pub sr: SrConfig,
    pub fusion: FusionConfig,
    pub score_mode: ScoreMode,
    pub mode: PredictMode,
    pub target_split: Split,

    pub f1_mode: F1Mode,
    pub eval_pos: Option<BTreeSet<Pos>>,
    pub synset_degree_buckets: BucketSpec,
    pub sememe_count_buckets: BucketSpec,
    pub sememe_degree_buckets: BucketSpec,
    pub top_k: usize,

    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let seed = 42;
        RunConfig {
            seed,
            threads: 0,
            output_dir: PathBuf::from("."),
            triplets: None,
            pos: None,
            vectors: None,
            dataset: None,
            embeddings: None,
            predictions: None,
            ratios: (0.8, 0.1, 0.1),
            min_node_degree: 1,
            min_relation_count: 1,
            keep_pos: None,
            train: TrainConfig {
                seed,
                ..Default::default()
            },
            sr: SrConfig::default(),
            fusion: FusionConfig::default(),
            score_mode: ScoreMode::default(),
            mode: PredictMode::Fused,
            target_split: Split::Test,
            f1_mode: F1Mode::default(),
            eval_pos: None,
            synset_degree_buckets: BucketSpec::default_for(BucketQuantity::SynsetDegree),
            sememe_count_buckets: BucketSpec::default_for(BucketQuantity::SememeCount),
            sememe_degree_buckets: BucketSpec::default_for(BucketQuantity::SememeDegree),
            top_k: 10,
            synth: SynthConfig {
                seed,
                ..Default::default()
            },
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| config_err!("{key}: cannot parse {value:?}: {e}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(config_err!("{key}: expected true or false, got {value:?}")),
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse(key, v.trim())).collect()
}

fn parse_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

fn parse_pos_set(key: &str, value: &str) -> Result<Option<BTreeSet<Pos>>, ConfigError> {
    let set: BTreeSet<Pos> = parse_list(key, value)?.into_iter().collect();
    Ok((!set.is_empty()).then_some(set))
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn show_path(p: &Option<PathBuf>) -> String {
    p.as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_default()
}

fn show_pos(p: &Option<BTreeSet<Pos>>) -> String {
    p.as_ref().map(join).unwrap_or_default()
}

fn corruption_name(c: Corruption) -> &'static str {
    match c {
        Corruption::Tail => "tail",
        Corruption::HeadOrTail => "head-or-tail",
    }
}

impl RunConfig {
    /// Every key with its current value, sorted by key.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let t = &self.train;
        let s = &self.synth;
        let mut out = vec![
            ("seed", self.seed.to_string()),
            ("threads", self.threads.to_string()),
            ("output.dir", self.output_dir.display().to_string()),
            ("input.triplets", show_path(&self.triplets)),
            ("input.pos", show_path(&self.pos)),
            ("input.vectors", show_path(&self.vectors)),
            ("input.dataset", show_path(&self.dataset)),
            ("input.embeddings", show_path(&self.embeddings)),
            ("input.predictions", show_path(&self.predictions)),
            (
                "prepare.ratios",
                join([self.ratios.0, self.ratios.1, self.ratios.2]),
            ),
            ("prepare.min_node_degree", self.min_node_degree.to_string()),
            (
                "prepare.min_relation_count",
                self.min_relation_count.to_string(),
            ),
            ("prepare.pos", show_pos(&self.keep_pos)),
            ("train.dim", t.dim.to_string()),
            ("train.margin", t.margin.to_string()),
            ("train.lambda1", t.lambda1.to_string()),
            ("train.lambda2", t.lambda2.to_string()),
            ("train.learning_rate", t.learning_rate.to_string()),
            ("train.epochs", t.epochs.to_string()),
            ("train.batch_size", t.batch_size.to_string()),
            ("train.negatives", t.negatives_per_positive.to_string()),
            ("train.normalize", t.normalize_entities.to_string()),
            ("train.deterministic", t.deterministic.to_string()),
            (
                "train.corruption",
                corruption_name(t.corruption).to_string(),
            ),
            (
                "train.type_consistent",
                t.type_consistent_negatives.to_string(),
            ),
            ("sr.decay", self.sr.decay.to_string()),
            (
                "sr.max_neighbors",
                self.sr.max_neighbors.unwrap_or(0).to_string(),
            ),
            ("fusion.lambda_c", self.fusion.lambda_c.to_string()),
            ("fusion.lambda_r", self.fusion.lambda_r.to_string()),
            ("fusion.threshold", self.fusion.threshold.to_string()),
            ("predict.score", self.score_mode.to_string()),
            ("predict.mode", self.mode.to_string()),
            ("predict.split", self.target_split.to_string()),
            ("eval.f1", self.f1_mode.to_string()),
            ("eval.pos", show_pos(&self.eval_pos)),
            (
                "analyze.synset_degree_buckets",
                join(&self.synset_degree_buckets.cuts),
            ),
            (
                "analyze.sememe_count_buckets",
                join(&self.sememe_count_buckets.cuts),
            ),
            (
                "analyze.sememe_degree_buckets",
                join(&self.sememe_degree_buckets.cuts),
            ),
            ("analyze.top_k", self.top_k.to_string()),
            ("synth.n_sememes", s.n_sememes.to_string()),
            ("synth.n_synsets", s.n_synsets.to_string()),
            ("synth.min_sememes", s.sememes_per_synset.0.to_string()),
            ("synth.max_sememes", s.sememes_per_synset.1.to_string()),
            ("synth.antonym_pairs", s.n_antonym_pairs.to_string()),
            ("synth.hypernym_edges", s.n_hypernym_edges.to_string()),
            ("synth.vector_dim", s.vector_dim.to_string()),
            ("synth.noise", s.noise.to_string()),
            ("synth.twin_fraction", s.twin_fraction.to_string()),
            ("synth.family_swaps", s.family_swaps.to_string()),
            (
                "synth.non_nominal_fraction",
                s.non_nominal_fraction.to_string(),
            ),
        ];
        out.sort_by_key(|(k, _)| *k);
        out
    }

    pub fn keys() -> Vec<&'static str> {
        RunConfig::default()
            .pairs()
            .into_iter()
            .map(|(k, _)| k)
            .collect()
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        let t = &mut self.train;
        let s = &mut self.synth;
        match key {
            "seed" => {
                self.seed = parse(key, value)?;
                t.seed = self.seed;
                s.seed = self.seed;
            }
            "threads" => self.threads = parse(key, value)?,
            "output.dir" => {
                self.output_dir = parse_path(value).ok_or_else(|| config_err!("{key} is empty"))?
            }
            "input.triplets" => self.triplets = parse_path(value),
            "input.pos" => self.pos = parse_path(value),
            "input.vectors" => self.vectors = parse_path(value),
            "input.dataset" => self.dataset = parse_path(value),
            "input.embeddings" => self.embeddings = parse_path(value),
            "input.predictions" => self.predictions = parse_path(value),
            "prepare.ratios" => match parse_list::<f64>(key, value)?.as_slice() {
                [a, b, c] => self.ratios = (*a, *b, *c),
                _ => return Err(config_err!("{key}: expected three comma-separated ratios")),
            },
            "prepare.min_node_degree" => self.min_node_degree = parse(key, value)?,
            "prepare.min_relation_count" => self.min_relation_count = parse(key, value)?,
            "prepare.pos" => self.keep_pos = parse_pos_set(key, value)?,
            "train.dim" => t.dim = parse(key, value)?,
            "train.margin" => t.margin = parse(key, value)?,
            "train.lambda1" => t.lambda1 = parse(key, value)?,
            "train.lambda2" => t.lambda2 = parse(key, value)?,
            "train.learning_rate" => t.learning_rate = parse(key, value)?,
            "train.epochs" => t.epochs = parse(key, value)?,
            "train.batch_size" => t.batch_size = parse(key, value)?,
            "train.negatives" => t.negatives_per_positive = parse(key, value)?,
            "train.normalize" => t.normalize_entities = parse_bool(key, value)?,
            "train.deterministic" => t.deterministic = parse_bool(key, value)?,
            "train.corruption" => {
                t.corruption = match value {
                    "tail" => Corruption::Tail,
                    "head-or-tail" => Corruption::HeadOrTail,
                    _ => {
                        return Err(config_err!(
                            "{key}: expected tail or head-or-tail, got {value:?}"
                        ))
                    }
                }
            }
            "train.type_consistent" => t.type_consistent_negatives = parse_bool(key, value)?,
            "sr.decay" => self.sr.decay = parse(key, value)?,
            "sr.max_neighbors" => {
                let k: usize = parse(key, value)?;
                self.sr.max_neighbors = (k > 0).then_some(k);
            }
            "fusion.lambda_c" => self.fusion.lambda_c = parse(key, value)?,
            "fusion.lambda_r" => self.fusion.lambda_r = parse(key, value)?,
            "fusion.threshold" => self.fusion.threshold = parse(key, value)?,
            "predict.score" => self.score_mode = parse(key, value)?,
            "predict.mode" => self.mode = parse(key, value)?,
            "predict.split" => self.target_split = parse(key, value)?,
            "eval.f1" => self.f1_mode = parse(key, value)?,
            "eval.pos" => self.eval_pos = parse_pos_set(key, value)?,
            "analyze.synset_degree_buckets" => {
                self.synset_degree_buckets = buckets(key, value, BucketQuantity::SynsetDegree)?
            }
            "analyze.sememe_count_buckets" => {
                self.sememe_count_buckets = buckets(key, value, BucketQuantity::SememeCount)?
            }
            "analyze.sememe_degree_buckets" => {
                self.sememe_degree_buckets = buckets(key, value, BucketQuantity::SememeDegree)?
            }
            "analyze.top_k" => self.top_k = parse(key, value)?,
            "synth.n_sememes" => s.n_sememes = parse(key, value)?,
            "synth.n_synsets" => s.n_synsets = parse(key, value)?,
            "synth.min_sememes" => s.sememes_per_synset.0 = parse(key, value)?,
            "synth.max_sememes" => s.sememes_per_synset.1 = parse(key, value)?,
            "synth.antonym_pairs" => s.n_antonym_pairs = parse(key, value)?,
            "synth.hypernym_edges" => s.n_hypernym_edges = parse(key, value)?,
            "synth.vector_dim" => s.vector_dim = parse(key, value)?,
            "synth.noise" => s.noise = parse(key, value)?,
            "synth.twin_fraction" => s.twin_fraction = parse(key, value)?,
            "synth.family_swaps" => s.family_swaps = parse(key, value)?,
            "synth.non_nominal_fraction" => s.non_nominal_fraction = parse(key, value)?,
            _ => return Err(config_err!("unknown config key {key:?}")),
        }
        Ok(())
    }

    /// Applies a `key = value` file body. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err!("{origin}:{}: expected key = value", i + 1))?;
            self.set(key.trim(), value)
                .map_err(|e| config_err!("{origin}:{}: {e}", i + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err!("cannot read config {}: {e}", path.display()))?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Applies `SEMEME_<KEY>` overrides where `<KEY>` is the key upper-cased with
    /// `.` replaced by `_`, e.g. `SEMEME_TRAIN_DIM`.
    pub fn apply_env(
        &mut self,
        vars: impl IntoIterator<Item = (String, String)>,
    ) -> Result<(), ConfigError> {
        let keys = RunConfig::keys();
        for (name, value) in vars {
            let Some(rest) = name.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            match keys.iter().find(|k| env_suffix(k) == rest) {
                Some(key) => self
                    .set(key, &value)
                    .map_err(|e| config_err!("{name}: {e}"))?,
                None => log::warn!("ignoring {name}: not a config key"),
            }
        }
        Ok(())
    }

    /// `key=value` as given to `--set`.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| config_err!("--set expects key=value, got {assignment:?}"))?;
        self.set(key.trim(), value)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let check = |r: sememe_core::Result<()>| r.map_err(|e| ConfigError(e.to_string()));
        check(self.train.validate())?;
        check(self.sr.validate())?;
        check(self.fusion.validate())?;
        check(self.synth.validate())?;
        let (a, b, c) = self.ratios;
        if [a, b, c].iter().any(|r| !r.is_finite() || *r < 0.0) || (a + b + c - 1.0).abs() > 1e-9 {
            return Err(config_err!(
                "prepare.ratios must be non-negative and sum to 1, got {a},{b},{c}"
            ));
        }
        Ok(())
    }

    /// The resolved configuration, one `key = value` per line.
    pub fn echo(&self) -> String {
        self.pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

fn env_suffix(key: &str) -> String {
    key.to_ascii_uppercase().replace('.', "_")
}

fn buckets(key: &str, value: &str, quantity: BucketQuantity) -> Result<BucketSpec, ConfigError> {
    BucketSpec::new(quantity, parse_list(key, value)?).map_err(|e| config_err!("{key}: {e}"))
}
