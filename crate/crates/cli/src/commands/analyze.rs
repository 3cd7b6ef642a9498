use anyhow::Result;
use sememe_core::eval::{bucket_analysis, sememe_difficulty};
use sememe_core::EvalOptions;

use super::eval::load_predictions;
use super::{load_dataset, require, Output};
use crate::config::RunConfig;

pub fn run(config: &RunConfig) -> Result<()> {
    let predictions = require(&config.predictions, "input.predictions")?;
    let store = load_dataset(config)?;
    let out = Output::create(config, "analyze")?;
    let results = load_predictions(predictions)?;
    let options = EvalOptions {
        f1_mode: config.f1_mode,
        pos: config.eval_pos.clone(),
    };
    for spec in [
        &config.synset_degree_buckets,
        &config.sememe_count_buckets,
        &config.sememe_degree_buckets,
    ] {
        let report = bucket_analysis(&results, &store, config.target_split, spec, &options)?;
        out.write(
            &format!("buckets_{}.csv", spec.quantity.as_str()),
            &report.to_csv(),
        )?;
    }
    let difficulty = sememe_difficulty(
        &results,
        &store,
        config.target_split,
        config.top_k,
        &options,
    )?;
    out.write("difficulty.tsv", &difficulty.to_text())?;
    log::info!("sememe difficulty\n{}", difficulty.to_text());
    Ok(())
}
