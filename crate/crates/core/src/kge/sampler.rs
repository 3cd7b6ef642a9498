use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Triplet, TripletStore};
use crate::ids::{NodeKind, Split};

/// Which end of a positive triplet gets replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    Tail,
    /// Head or tail with equal probability.
    HeadOrTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerOptions {
    pub corruption: Corruption,
    pub type_consistent: bool,
    /// Rejection-sampling attempts before falling back to enumerating legal replacements.
    pub max_attempts: usize,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            corruption: Corruption::Tail,
            type_consistent: false,
            max_attempts: 64,
        }
    }
}

/// Draws corrupted triplets that are not in the training split.
///
/// Replacements are uniform over the candidate pool (all nodes, or the
/// replaced node's kind when `type_consistent`), conditioned on the result
/// not being a training triplet.
#[derive(Debug)]
pub struct NegativeSampler<'a> {
    store: &'a TripletStore,
    train: HashSet<Edge>,
    all: Vec<usize>,
    synsets: Vec<usize>,
    sememes: Vec<usize>,
    options: SamplerOptions,
}

impl<'a> NegativeSampler<'a> {
    pub fn new(store: &'a TripletStore, options: SamplerOptions) -> Self {
        let train = store
            .edges()
            .iter()
            .zip(store.edge_splits())
            .filter(|(_, &s)| s == Split::Train)
            .map(|(e, _)| *e)
            .collect();
        let kind_rows = |kind: NodeKind| -> Vec<usize> {
            store
                .nodes()
                .iter()
                .enumerate()
                .filter(|(_, n)| n.kind() == kind)
                .map(|(i, _)| i)
                .collect()
        };
        NegativeSampler {
            store,
            train,
            all: (0..store.node_count()).collect(),
            synsets: kind_rows(NodeKind::Synset),
            sememes: kind_rows(NodeKind::Sememe),
            options,
        }
    }

    pub(crate) fn sample_edge(&self, positive: Edge, rng: &mut impl Rng) -> Result<Edge> {
        let corrupt_head = match self.options.corruption {
            Corruption::Tail => false,
            Corruption::HeadOrTail => rng.random_bool(0.5),
        };
        let replaced = if corrupt_head {
            positive.head
        } else {
            positive.tail
        };
        let pool = if self.options.type_consistent {
            match self.store.nodes()[replaced].kind() {
                NodeKind::Synset => &self.synsets,
                NodeKind::Sememe => &self.sememes,
            }
        } else {
            &self.all
        };
        let with = |node: usize| {
            if corrupt_head {
                Edge {
                    head: node,
                    ..positive
                }
            } else {
                Edge {
                    tail: node,
                    ..positive
                }
            }
        };
        for _ in 0..self.options.max_attempts {
            let candidate = with(pool[rng.random_range(0..pool.len())]);
            if !self.train.contains(&candidate) {
                return Ok(candidate);
            }
        }
        let legal: Vec<Edge> = pool
            .iter()
            .map(|&n| with(n))
            .filter(|e| !self.train.contains(e))
            .collect();
        if legal.is_empty() {
            let store = self.store;
            return Err(Error::Sampling(format!(
                "every replacement of ({}, {}, {}) is a training triplet",
                store.nodes()[positive.head],
                store.relations()[positive.relation].name(),
                store.nodes()[positive.tail]
            )));
        }
        Ok(legal[rng.random_range(0..legal.len())])
    }

    /// Corrupts a training triplet.
    pub fn sample(&self, positive: &Triplet, rng: &mut impl Rng) -> Result<Triplet> {
        let edge = Edge {
            head: self
                .store
                .node_idx(&positive.head)
                .ok_or_else(|| Error::Lookup(positive.head.to_string()))?,
            relation: self
                .store
                .relation_idx(&positive.relation)
                .ok_or_else(|| Error::Lookup(positive.relation.to_string()))?,
            tail: self
                .store
                .node_idx(&positive.tail)
                .ok_or_else(|| Error::Lookup(positive.tail.to_string()))?,
        };
        if !self.train.contains(&edge) {
            return Err(Error::Contract(format!(
                "({positive}) is not a training triplet"
            )));
        }
        let e = self.sample_edge(edge, rng)?;
        let nodes = self.store.nodes();
        Ok(Triplet {
            head: nodes[e.head].clone(),
            relation: positive.relation.clone(),
            tail: nodes[e.tail].clone(),
        })
    }
}

/// One tail-corrupted negative for `positive` with default sampler options.
pub fn negative_sample(
    store: &TripletStore,
    positive: &Triplet,
    rng: &mut impl Rng,
) -> Result<Triplet> {
    NegativeSampler::new(store, SamplerOptions::default()).sample(positive, rng)
}
