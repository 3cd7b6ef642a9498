use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use sememe_core::fusion::write_predictions;
use sememe_core::kge::predict_sememes_rr;
use sememe_core::{
    fuse, threshold_select, EmbeddingTable, NodeId, PredictionResult, Provenance,
    SemanticRecommender, SemanticVectorStore, Split,
};

use super::{load_dataset, optional, Output};
use crate::config::{PredictMode, RunConfig};

pub fn run(config: &RunConfig) -> Result<()> {
    let store = load_dataset(config)?;
    let embeddings = optional(&config.embeddings, "input.embeddings")?;
    let vectors = optional(&config.vectors, "input.vectors")?;
    let out = Output::create(config, "predict")?;

    let table = embeddings
        .map(|p| EmbeddingTable::load(p).with_context(|| format!("loading {}", p.display())))
        .transpose()?;
    let vectors = vectors
        .map(|p| SemanticVectorStore::load(p).with_context(|| format!("loading {}", p.display())))
        .transpose()?;
    match (config.mode, &table, &vectors) {
        (_, None, None) => bail!("no model: pass --embeddings and/or --vectors"),
        (PredictMode::Rr, None, _) => bail!("rr mode needs --embeddings"),
        (PredictMode::Sr, _, None) => bail!("sr mode needs --vectors"),
        (PredictMode::Fused, None, Some(_)) => bail!("fused mode needs --embeddings"),
        (PredictMode::Fused, Some(_), None) => {
            log::warn!("no semantic vectors given; every target falls back to RR")
        }
        _ => {}
    }
    if let Some(v) = &vectors {
        let unknown = v.unknown_ids(&store).len();
        if unknown > 0 {
            log::warn!("{unknown} semantic vectors belong to synsets absent from the dataset");
        }
    }

    let train = store.annotations(Split::Train);
    let candidates: Vec<NodeId> = store.sememes().cloned().collect();
    let recommender = match &vectors {
        Some(v) if config.mode != PredictMode::Rr => Some(SemanticRecommender::new(
            v,
            &train,
            candidates.clone(),
            config.sr,
        )?),
        _ => None,
    };
    let targets: Vec<NodeId> = store
        .annotations(config.target_split)
        .synsets()
        .cloned()
        .collect();

    let predict_one = |target: &NodeId| -> Result<Option<PredictionResult>> {
        let delta = config.fusion.threshold;
        let sr = match &recommender {
            Some(r) if r.covers(target) => Some(r.recommend(target)?),
            _ => None,
        };
        let rr = match (&table, config.mode) {
            (Some(t), PredictMode::Rr | PredictMode::Fused) => {
                Some(predict_sememes_rr(t, target, &candidates)?)
            }
            _ => None,
        };
        Ok(match (config.mode, sr, rr) {
            (PredictMode::Sr, Some(sr), _) => Some(threshold_select(
                config.score_mode.apply(&sr),
                delta,
                Provenance::Sr,
            )),
            (PredictMode::Sr, None, _) => None,
            (PredictMode::Fused, Some(sr), Some(rr)) => Some(threshold_select(
                fuse(Some(&sr), &rr, &config.fusion)?,
                delta,
                Provenance::Fused,
            )),
            (_, _, Some(rr)) => Some(threshold_select(
                config.score_mode.apply(&rr),
                delta,
                Provenance::Rr,
            )),
            (_, _, None) => unreachable!("model availability checked above"),
        })
    };
    let predicted: Vec<Option<PredictionResult>> = targets
        .par_iter()
        .map(|t| predict_one(t).with_context(|| format!("predicting {t}")))
        .collect::<Result<_>>()?;

    let uncovered = predicted.iter().filter(|p| p.is_none()).count();
    if uncovered > 0 {
        log::warn!("{uncovered} targets have no semantic vector and are omitted");
    }
    let fallback = predicted
        .iter()
        .flatten()
        .filter(|p| config.mode == PredictMode::Fused && p.provenance == Provenance::Rr)
        .count();
    if fallback > 0 && recommender.is_some() {
        log::warn!("{fallback} targets lack a semantic vector; their rankings come from RR only");
    }
    let results: BTreeMap<NodeId, PredictionResult> = predicted
        .into_iter()
        .flatten()
        .map(|p| (p.target.clone(), p))
        .collect();
    out.write("predictions.tsv", &write_predictions(&results))?;
    log::info!(
        "{} of {} {} synsets predicted ({} mode)",
        results.len(),
        targets.len(),
        config.target_split,
        config.mode
    );
    Ok(())
}
