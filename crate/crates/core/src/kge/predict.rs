use super::loss::distance;
use super::EmbeddingTable;
use crate::error::{Error, Result};
use crate::ids::{NodeId, RelationId};
use crate::ranking::ScoredRanking;

/// Ranks `candidates` as tails of `(target, have_sememe, ?)`, scoring each by
/// `−d(b + r_h, s)` so the closest sememe comes first.
pub fn predict_sememes_rr(
    table: &EmbeddingTable,
    target: &NodeId,
    candidates: &[NodeId],
) -> Result<ScoredRanking> {
    if candidates.is_empty() {
        return Err(Error::Contract(format!(
            "no candidate sememes for {target}"
        )));
    }
    let b = table
        .node_vector(target)
        .ok_or_else(|| Error::Lookup(target.to_string()))?;
    let rh = table
        .relation_vector(&RelationId::have_sememe())
        .ok_or_else(|| Error::Lookup(RelationId::have_sememe().to_string()))?;
    let scores = candidates
        .iter()
        .map(|s| {
            let v = table
                .node_vector(s)
                .ok_or_else(|| Error::Lookup(s.to_string()))?;
            Ok((s.clone(), -distance(b, rh, v)))
        })
        .collect::<Result<Vec<_>>>()?;
    ScoredRanking::from_scores(target.clone(), scores)
}
