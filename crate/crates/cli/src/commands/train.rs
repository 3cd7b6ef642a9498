use anyhow::Result;
use sememe_core::kge;

use super::{load_dataset, Output};
use crate::config::RunConfig;

pub fn run(config: &RunConfig) -> Result<()> {
    let store = load_dataset(config)?;
    let out = Output::create(config, "train")?;
    let outcome = kge::train(&store, &config.train)?;
    if let Some(last) = outcome.trace.last() {
        log::info!(
            "epoch {}: l1={:.6} l2={:.6} total={:.6}",
            last.epoch,
            last.l1,
            last.l2,
            last.total
        );
    }
    out.write("embeddings.txt", &outcome.table.to_snapshot_text())?;
    out.write("loss.csv", &outcome.trace_csv())?;
    Ok(())
}
