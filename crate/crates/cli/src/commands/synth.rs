use anyhow::Result;
use sememe_core::synth::{generate, gold_tsv};

use super::Output;
use crate::config::RunConfig;

pub fn run(config: &RunConfig) -> Result<()> {
    let out = Output::create(config, "synth")?;
    let data = generate(&config.synth)?;
    out.write("triplets.tsv", &data.store.to_tsv(false))?;
    out.write("pos.tsv", &data.store.pos_tsv())?;
    out.write("vectors.txt", &data.vectors.to_text())?;
    out.write("gold.tsv", &gold_tsv(&data.gold))?;
    log::info!("generated\n{}", data.store.counts());
    Ok(())
}
