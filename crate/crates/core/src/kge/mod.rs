//! Translational relation embeddings over the synset/sememe graph.
//!
//! Training minimizes `λ1·L1 + λ2·L2` where `L1` is the margin ranking loss
//! over tail-corrupted triplets and `L2` ties every annotated synset plus the
//! equivalence relation to the sum of its sememe vectors. Setting `λ2 = 0`
//! recovers plain TransE.

mod loss;
mod predict;
mod sampler;
mod train;

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::TripletStore;
use crate::ids::{NodeId, RelationId};
use crate::snapshot::{write_row, Snapshot};

pub use loss::{
    equivalence_loss, equivalence_loss_gradient, margin_loss, margin_loss_gradient, score_triplet,
    Gradient,
};
pub use predict::predict_sememes_rr;
pub use sampler::{negative_sample, Corruption, NegativeSampler, SamplerOptions};
pub use train::{init_embeddings, train, EpochLoss, TrainOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub margin: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub negatives_per_positive: usize,
    pub seed: u64,
    /// Project entity vectors back to unit length after every update.
    pub normalize_entities: bool,
    /// Sequential updates only. When false, per-batch gradients are computed in
    /// parallel and summed chunk by chunk, which changes floating-point
    /// grouping relative to a sequential run.
    pub deterministic: bool,
    pub corruption: Corruption,
    /// Draw corrupted tails (or heads) only from nodes of the replaced node's kind.
    pub type_consistent_negatives: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 800,
            margin: 4.0,
            lambda1: 0.95,
            lambda2: 0.05,
            learning_rate: 0.01,
            epochs: 200,
            batch_size: 100,
            negatives_per_positive: 1,
            seed: 42,
            normalize_entities: false,
            deterministic: true,
            corruption: Corruption::Tail,
            type_consistent_negatives: false,
        }
    }
}

impl TrainConfig {
    /// The TransE baseline: identical except that the equivalence term is off.
    pub fn transe(&self) -> Self {
        TrainConfig {
            lambda2: 0.0,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if self.dim == 0 {
            return fail("embedding dimension must be at least 1");
        }
        if !(self.margin > 0.0 && self.margin.is_finite()) {
            return fail("margin must be positive");
        }
        if !(self.lambda1 >= 0.0 && self.lambda2 >= 0.0)
            || !self.lambda1.is_finite()
            || !self.lambda2.is_finite()
        {
            return fail("loss weights must be non-negative");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail("learning rate must be positive");
        }
        if self.batch_size == 0 {
            return fail("batch size must be at least 1");
        }
        if self.negatives_per_positive == 0 {
            return fail("at least one negative per positive is required");
        }
        Ok(())
    }
}

/// Dense vectors for every node and relation, all of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    nodes: Vec<NodeId>,
    node_index: HashMap<NodeId, usize>,
    node_data: Vec<f64>,
    relations: Vec<RelationId>,
    relation_index: HashMap<RelationId, usize>,
    relation_data: Vec<f64>,
}

impl EmbeddingTable {
    /// Builds a table from explicit vectors. Every vector must have length `dim`.
    pub fn from_vectors(
        dim: usize,
        nodes: Vec<(NodeId, Vec<f64>)>,
        relations: Vec<(RelationId, Vec<f64>)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config(
                "embedding dimension must be at least 1".into(),
            ));
        }
        let mut table = EmbeddingTable {
            dim,
            nodes: Vec::new(),
            node_index: HashMap::new(),
            node_data: Vec::new(),
            relations: Vec::new(),
            relation_index: HashMap::new(),
            relation_data: Vec::new(),
        };
        for (id, v) in nodes {
            table.check_vector(&id.to_string(), &v)?;
            if table
                .node_index
                .insert(id.clone(), table.nodes.len())
                .is_some()
            {
                return Err(Error::Format(format!("duplicate vector for {id}")));
            }
            table.nodes.push(id);
            table.node_data.extend(v);
        }
        for (id, v) in relations {
            table.check_vector(&id.to_string(), &v)?;
            if table
                .relation_index
                .insert(id.clone(), table.relations.len())
                .is_some()
            {
                return Err(Error::Format(format!("duplicate vector for {id}")));
            }
            table.relations.push(id);
            table.relation_data.extend(v);
        }
        Ok(table)
    }

    fn check_vector(&self, id: &str, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Format(format!(
                "{id} has dimension {}, expected {}",
                v.len(),
                self.dim
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Format(format!("{id} has a non-finite entry")));
        }
        Ok(())
    }

    pub(crate) fn sampled(store: &TripletStore, dim: usize, rng: &mut impl Rng) -> Self {
        let bound = 6.0 / (dim as f64).sqrt();
        let mut relations = store.relations().to_vec();
        relations.push(RelationId::semantic_equivalence());
        let node_data = (0..store.node_count() * dim)
            .map(|_| rng.random_range(-bound..=bound))
            .collect();
        let relation_data = (0..relations.len() * dim)
            .map(|_| rng.random_range(-bound..=bound))
            .collect();
        EmbeddingTable {
            dim,
            nodes: store.nodes().to_vec(),
            node_index: store
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), i))
                .collect(),
            node_data,
            relation_index: relations
                .iter()
                .enumerate()
                .map(|(i, r)| (r.clone(), i))
                .collect(),
            relations,
            relation_data,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn relations(&self) -> &[RelationId] {
        &self.relations
    }

    pub fn node_index(&self, id: &NodeId) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn relation_index(&self, id: &RelationId) -> Option<usize> {
        self.relation_index.get(id).copied()
    }

    pub fn node_vector(&self, id: &NodeId) -> Option<&[f64]> {
        self.node_index(id).map(|i| self.node_row(i))
    }

    pub fn relation_vector(&self, id: &RelationId) -> Option<&[f64]> {
        self.relation_index(id).map(|i| self.relation_row(i))
    }

    pub fn node_row(&self, i: usize) -> &[f64] {
        &self.node_data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn node_row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.node_data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn relation_row(&self, i: usize) -> &[f64] {
        &self.relation_data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn relation_row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.relation_data[i * self.dim..(i + 1) * self.dim]
    }

    pub(crate) fn node_lookup(&self, id: &NodeId) -> Result<usize> {
        self.node_index(id)
            .ok_or_else(|| Error::Lookup(id.to_string()))
    }

    pub(crate) fn relation_lookup(&self, id: &RelationId) -> Result<usize> {
        self.relation_index(id)
            .ok_or_else(|| Error::Lookup(id.to_string()))
    }

    pub fn is_finite(&self) -> bool {
        self.node_data
            .iter()
            .chain(&self.relation_data)
            .all(|x| x.is_finite())
    }

    pub(crate) fn normalize_node(&mut self, i: usize) {
        let row = self.node_row_mut(i);
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|x| *x /= norm);
        }
    }

    pub fn to_snapshot_text(&self) -> String {
        let mut out = format!("D={}\n", self.dim);
        for (i, id) in self.nodes.iter().enumerate() {
            write_row(&mut out, &id.to_string(), self.node_row(i));
        }
        for (i, id) in self.relations.iter().enumerate() {
            write_row(&mut out, &id.to_string(), self.relation_row(i));
        }
        out
    }

    pub fn parse_snapshot(text: &str) -> Result<Self> {
        let snapshot = Snapshot::parse(text)?;
        let mut nodes = Vec::new();
        let mut relations = Vec::new();
        for (id, v) in snapshot.rows {
            if id.starts_with("rel:") {
                let rel = id.parse::<RelationId>().map_err(Error::Format)?;
                relations.push((rel, v));
            } else {
                let node = id.parse::<NodeId>().map_err(Error::Format)?;
                nodes.push((node, v));
            }
        }
        Self::from_vectors(snapshot.dim, nodes, relations)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_snapshot(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_snapshot_text())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip() {
        let table = EmbeddingTable::from_vectors(
            2,
            vec![
                (NodeId::synset("a").unwrap(), vec![0.1, -2.5e-17]),
                (NodeId::sememe("x").unwrap(), vec![1.0 / 3.0, 7.0]),
            ],
            vec![
                (RelationId::have_sememe(), vec![0.0, 1.0]),
                (RelationId::semantic_equivalence(), vec![-0.0, 2.0]),
            ],
        )
        .unwrap();
        let back = EmbeddingTable::parse_snapshot(&table.to_snapshot_text()).unwrap();
        assert_eq!(back, table);
        assert_eq!(back.to_snapshot_text(), table.to_snapshot_text());
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let err = EmbeddingTable::from_vectors(
            2,
            vec![(NodeId::synset("a").unwrap(), vec![0.1])],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        assert!(EmbeddingTable::parse_snapshot("D=1\nfoo\t1\n").is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        for bad in [
            TrainConfig {
                dim: 0,
                ..Default::default()
            },
            TrainConfig {
                margin: 0.0,
                ..Default::default()
            },
            TrainConfig {
                lambda2: -1.0,
                ..Default::default()
            },
            TrainConfig {
                learning_rate: 0.0,
                ..Default::default()
            },
            TrainConfig {
                batch_size: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(bad.validate().unwrap_err(), Error::Config(_)));
        }
        assert_eq!(TrainConfig::default().transe().lambda2, 0.0);
    }
}
