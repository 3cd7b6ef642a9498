//! Descending sememe rankings with deterministic tie-breaking.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::ids::NodeId;

/// A target synset's candidate sememes ordered by score, highest first.
///
/// Ties are broken by ascending sememe id, so ranks never depend on input order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRanking {
    target: NodeId,
    entries: Vec<(NodeId, f64)>,
    ranks: HashMap<NodeId, usize>,
}

fn descending(a: &(NodeId, f64), b: &(NodeId, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

impl ScoredRanking {
    /// Sorts `scores` into a ranking. Duplicate candidates are a contract error.
    pub fn from_scores(target: NodeId, mut scores: Vec<(NodeId, f64)>) -> Result<Self> {
        scores.sort_by(descending);
        Self::from_ordered(target, scores)
    }

    /// Wraps entries that are already in final order. Scores must be non-increasing.
    pub fn from_ordered(target: NodeId, entries: Vec<(NodeId, f64)>) -> Result<Self> {
        if let Some(w) = entries.windows(2).find(|w| w[0].1 < w[1].1) {
            return Err(Error::Contract(format!(
                "ranking for {target} is not descending at {} ({}) < {} ({})",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
        let mut ranks = HashMap::with_capacity(entries.len());
        for (i, (s, _)) in entries.iter().enumerate() {
            if ranks.insert(s.clone(), i + 1).is_some() {
                return Err(Error::Contract(format!(
                    "sememe {s} appears twice in the ranking for {target}"
                )));
            }
        }
        Ok(ScoredRanking {
            target,
            entries,
            ranks,
        })
    }

    pub fn target(&self) -> &NodeId {
        &self.target
    }

    pub fn entries(&self) -> &[(NodeId, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based rank of `sememe`.
    pub fn rank(&self, sememe: &NodeId) -> Option<usize> {
        self.ranks.get(sememe).copied()
    }

    pub fn score(&self, sememe: &NodeId) -> Option<f64> {
        self.rank(sememe).map(|r| self.entries[r - 1].1)
    }

    pub fn order(&self) -> impl Iterator<Item = &NodeId> {
        self.entries.iter().map(|(s, _)| s)
    }

    pub fn candidates(&self) -> BTreeSet<&NodeId> {
        self.entries.iter().map(|(s, _)| s).collect()
    }

    /// Replaces every score by `weight / rank`, keeping the order.
    pub fn reciprocal(&self, weight: f64) -> ScoredRanking {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), weight / (i + 1) as f64))
            .collect();
        ScoredRanking {
            target: self.target.clone(),
            entries,
            ranks: self.ranks.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sem(n: &str) -> NodeId {
        NodeId::sememe(n).unwrap()
    }

    #[test]
    fn ties_break_by_name() {
        let r = ScoredRanking::from_scores(
            NodeId::synset("b").unwrap(),
            vec![(sem("z"), 1.0), (sem("a"), 1.0), (sem("m"), 2.0)],
        )
        .unwrap();
        let order: Vec<_> = r.order().map(|s| s.name().to_string()).collect();
        assert_eq!(order, ["m", "a", "z"]);
        assert_eq!(r.rank(&sem("a")), Some(2));
        assert_eq!(r.score(&sem("z")), Some(1.0));
    }

    #[test]
    fn duplicates_and_unsorted_rejected() {
        let t = NodeId::synset("b").unwrap();
        assert!(
            ScoredRanking::from_scores(t.clone(), vec![(sem("a"), 1.0), (sem("a"), 0.0)]).is_err()
        );
        assert!(ScoredRanking::from_ordered(t, vec![(sem("a"), 0.0), (sem("b"), 1.0)]).is_err());
    }

    #[test]
    fn shift_invariance() {
        let t = NodeId::synset("b").unwrap();
        let scores = vec![
            (sem("a"), 0.3),
            (sem("b"), -1.0),
            (sem("c"), 0.3),
            (sem("d"), 7.0),
        ];
        let base = ScoredRanking::from_scores(t.clone(), scores.clone()).unwrap();
        let shifted = ScoredRanking::from_scores(
            t,
            scores.into_iter().map(|(s, v)| (s, v + 100.0)).collect(),
        )
        .unwrap();
        assert!(base.order().eq(shifted.order()));
    }
}
