use anyhow::{Context, Result};
use sememe_core::TripletStore;

use super::{optional, require, Output};
use crate::config::RunConfig;

pub fn run(config: &RunConfig) -> Result<()> {
    let triplets = require(&config.triplets, "input.triplets")?;
    let pos = optional(&config.pos, "input.pos")?;
    let out = Output::create(config, "prepare")?;

    let store = TripletStore::load_triplets(triplets, pos)
        .with_context(|| format!("loading {}", triplets.display()))?;
    let mut summary = format!("loaded\n{}\n", store.counts());
    let mut store = store.filter_low_frequency(config.min_node_degree, config.min_relation_count);
    if let Some(keep) = &config.keep_pos {
        store = store.filter_by_pos(keep)?;
    }
    summary.push_str(&format!("filtered\n{}\n", store.counts()));
    let split = store.split_dataset(config.ratios, config.seed)?;
    summary.push_str(&format!("split\n{}\n", split.counts()));

    out.write("split.tsv", &split.to_tsv(true))?;
    out.write("pos.tsv", &split.pos_tsv())?;
    out.write("summary.txt", &summary)?;
    log::info!("{summary}");
    Ok(())
}
