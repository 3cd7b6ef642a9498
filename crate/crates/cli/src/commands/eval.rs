use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sememe_core::eval::render_table;
use sememe_core::fusion::parse_predictions;
use sememe_core::{evaluate, EvalOptions, NodeId, PredictionResult};

use super::{check_exists, load_dataset, Output};
use crate::config::{ConfigError, RunConfig};

pub(crate) fn load_predictions(path: &Path) -> Result<BTreeMap<NodeId, PredictionResult>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_predictions(&text).with_context(|| format!("parsing {}", path.display()))
}

fn named_inputs(
    config: &RunConfig,
    args: &[String],
) -> Result<Vec<(String, PathBuf)>, ConfigError> {
    let mut inputs = Vec::new();
    for arg in args {
        let (name, file) = arg
            .split_once('=')
            .filter(|(n, f)| !n.is_empty() && !f.is_empty())
            .ok_or_else(|| ConfigError(format!("--predictions expects NAME=FILE, got {arg:?}")))?;
        inputs.push((name.to_string(), PathBuf::from(file)));
    }
    if inputs.is_empty() {
        if let Some(p) = &config.predictions {
            inputs.push(("model".to_string(), p.clone()));
        }
    }
    if inputs.is_empty() {
        return Err(ConfigError(
            "no predictions given (--predictions NAME=FILE)".into(),
        ));
    }
    for (name, path) in &inputs {
        check_exists(path, &format!("predictions {name}"))?;
    }
    Ok(inputs)
}

pub fn run(config: &RunConfig, args: &[String]) -> Result<()> {
    let inputs = named_inputs(config, args)?;
    let store = load_dataset(config)?;
    let out = Output::create(config, "eval")?;
    let options = EvalOptions {
        f1_mode: config.f1_mode,
        pos: config.eval_pos.clone(),
    };
    let mut reports = Vec::new();
    let mut records = String::new();
    for (name, path) in inputs {
        let results = load_predictions(&path)?;
        let report = evaluate(&results, &store, config.target_split, &options)
            .with_context(|| format!("evaluating {name}"))?;
        records.push_str(&format!("# model={name}\n{}", report.to_records()));
        reports.push((name, report));
    }
    let table = render_table(&reports);
    out.write("report.txt", &records)?;
    out.write("table.txt", &table)?;
    print!("{table}");
    Ok(())
}
