use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

use super::loss::{accumulate_equivalence, accumulate_pair, Gradient, Slot};
use super::sampler::{NegativeSampler, SamplerOptions};
use super::{EmbeddingTable, TrainConfig};
use crate::error::{Error, Result};
use crate::graph::{Edge, TripletStore};
use crate::ids::{RelationId, RelationKind, Split};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochLoss {
    pub epoch: usize,
    pub l1: f64,
    pub l2: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub table: EmbeddingTable,
    pub trace: Vec<EpochLoss>,
}

impl TrainOutcome {
    /// Loss trace as CSV with header `epoch,l1,l2,total`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("epoch,l1,l2,total\n");
        for e in &self.trace {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                e.epoch, e.l1, e.l2, e.total
            ));
        }
        out
    }
}

/// Uniform `[−6/√D, 6/√D]` initialization for every node, relation and the
/// equivalence relation; entities are then unit-normalized if configured.
pub fn init_embeddings(store: &TripletStore, config: &TrainConfig) -> Result<EmbeddingTable> {
    let mut rng = SeededRng::seed_from_u64(config.seed);
    init_with(store, config, &mut rng)
}

fn init_with(
    store: &TripletStore,
    config: &TrainConfig,
    rng: &mut SeededRng,
) -> Result<EmbeddingTable> {
    if config.dim == 0 {
        return Err(Error::Config(
            "embedding dimension must be at least 1".into(),
        ));
    }
    if store.node_count() == 0 {
        return Err(Error::Contract("cannot embed an empty store".into()));
    }
    let mut table = EmbeddingTable::sampled(store, config.dim, rng);
    if config.normalize_entities {
        for i in 0..store.node_count() {
            table.normalize_node(i);
        }
    }
    Ok(table)
}

/// Mini-batch SGD on `λ1·L1 + λ2·L2`.
///
/// The equivalence term of a batch covers exactly the annotated training
/// synsets that occur in the batch's positive triplets.
pub fn train(store: &TripletStore, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    let positives: Vec<Edge> = store
        .edges()
        .iter()
        .zip(store.edge_splits())
        .filter(|(_, &s)| s == Split::Train)
        .map(|(e, _)| *e)
        .collect();
    if positives.is_empty() {
        return Err(Error::Contract("training split is empty".into()));
    }
    let mut rng = SeededRng::seed_from_u64(config.seed);
    let mut table = init_with(store, config, &mut rng)?;
    let sampler = NegativeSampler::new(
        store,
        SamplerOptions {
            corruption: config.corruption,
            type_consistent: config.type_consistent_negatives,
            ..Default::default()
        },
    );
    let equivalence = table
        .relation_index(&RelationId::semantic_equivalence())
        .expect("sampled tables carry the equivalence relation");

    // train-split sememe sets by synset row
    let mut annotated: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, &s) in store.edges().iter().zip(store.edge_splits()) {
        if s == Split::Train && store.relations()[e.relation].kind() == RelationKind::HaveSememe {
            annotated.entry(e.head).or_default().push(e.tail);
        }
    }

    let mut order: Vec<usize> = (0..positives.len()).collect();
    let mut trace = Vec::with_capacity(config.epochs);
    let threads = rayon::current_num_threads().max(1);
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let (mut l1, mut l2) = (0.0, 0.0);
        for batch in order.chunks(config.batch_size) {
            let mut pairs = Vec::with_capacity(batch.len() * config.negatives_per_positive);
            for &i in batch {
                let pos = positives[i];
                for _ in 0..config.negatives_per_positive {
                    pairs.push((slot(pos), slot(sampler.sample_edge(pos, &mut rng)?)));
                }
            }
            let mut synsets: Vec<usize> = batch
                .iter()
                .flat_map(|&i| [positives[i].head, positives[i].tail])
                .filter(|n| annotated.contains_key(n))
                .collect();
            synsets.sort_unstable();
            synsets.dedup();

            let (grad, batch_l1, batch_l2) = if config.deterministic || threads == 1 {
                batch_gradient(&table, &pairs, &synsets, &annotated, equivalence, config)
            } else {
                let chunk = pairs.len().div_ceil(threads).max(1);
                let syn_chunk = synsets.len().div_ceil(threads).max(1);
                let parts: Vec<(Gradient, f64, f64)> =
                    pairs
                        .par_chunks(chunk)
                        .map(|p| batch_gradient(&table, p, &[], &annotated, equivalence, config))
                        .chain(synsets.par_chunks(syn_chunk).map(|s| {
                            batch_gradient(&table, &[], s, &annotated, equivalence, config)
                        }))
                        .collect();
                let mut grad = Gradient::new(table.dim());
                let (mut a, mut b) = (0.0, 0.0);
                for (g, x, y) in &parts {
                    grad.merge(g);
                    a += x;
                    b += y;
                }
                (grad, a, b)
            };
            l1 += batch_l1;
            l2 += batch_l2;
            let touched = grad.apply(&mut table, config.learning_rate);
            if config.normalize_entities {
                for row in touched {
                    table.normalize_node(row);
                }
            }
        }
        let total = config.lambda1 * l1 + config.lambda2 * l2;
        if !total.is_finite() || !table.is_finite() {
            return Err(Error::Diverged { epoch, loss: total });
        }
        log::debug!("epoch {epoch}: l1={l1:.6} l2={l2:.6} total={total:.6}");
        trace.push(EpochLoss {
            epoch,
            l1,
            l2,
            total,
        });
    }
    Ok(TrainOutcome { table, trace })
}

fn slot(e: Edge) -> Slot {
    Slot {
        head: e.head,
        relation: e.relation,
        tail: e.tail,
    }
}

fn batch_gradient(
    table: &EmbeddingTable,
    pairs: &[(Slot, Slot)],
    synsets: &[usize],
    annotated: &HashMap<usize, Vec<usize>>,
    equivalence: usize,
    config: &TrainConfig,
) -> (Gradient, f64, f64) {
    let mut grad = Gradient::new(table.dim());
    let mut scratch = vec![0.0; table.dim()];
    let mut l1 = 0.0;
    for &(pos, neg) in pairs {
        l1 += accumulate_pair(
            table,
            pos,
            neg,
            config.margin,
            config.lambda1,
            &mut grad,
            &mut scratch,
        );
    }
    let mut l2 = 0.0;
    for b in synsets {
        l2 += accumulate_equivalence(
            table,
            *b,
            &annotated[b],
            equivalence,
            config.lambda2,
            &mut grad,
            &mut scratch,
        );
    }
    (grad, l1, l2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> TripletStore {
        TripletStore::parse(
            "syn:a\tantonym\tsyn:b\n\
             syn:a\thave_sememe\tsem:x\n\
             syn:b\thave_sememe\tsem:y\n\
             sem:x\tantonym\tsem:y\n\
             sem:y\tantonym\tsem:x\n\
             syn:c\thave_sememe\tsem:x\n",
        )
        .unwrap()
    }

    #[test]
    fn init_bounds_and_shape() {
        let store = TripletStore::parse(
            "syn:a\tr\tsyn:b\nsyn:b\thave_sememe\tsem:x\nsyn:c\thave_sememe\tsem:y\n",
        )
        .unwrap();
        assert_eq!(store.node_count(), 5);
        let config = TrainConfig {
            dim: 4,
            normalize_entities: false,
            seed: 17,
            ..Default::default()
        };
        let table = init_embeddings(&store, &config).unwrap();
        assert_eq!(table.nodes().len(), 5);
        assert_eq!(table.relations().len(), 3);
        for i in 0..5 {
            assert!(table.node_row(i).iter().all(|x| x.abs() <= 3.0));
        }
        assert_eq!(init_embeddings(&store, &config).unwrap(), table);
        assert!(init_embeddings(
            &store,
            &TrainConfig {
                dim: 0,
                ..config.clone()
            }
        )
        .is_err());
        assert!(init_embeddings(&TripletStore::default(), &config).is_err());
    }

    #[test]
    fn normalized_entities_stay_unit() {
        let config = TrainConfig {
            dim: 8,
            epochs: 5,
            batch_size: 2,
            normalize_entities: true,
            ..Default::default()
        };
        let out = train(&toy(), &config).unwrap();
        for i in 0..out.table.nodes().len() {
            let norm: f64 = out
                .table
                .node_row(i)
                .iter()
                .map(|x| x * x)
                .sum::<f64>()
                .sqrt();
            assert!((norm - 1.0).abs() < 1e-9);
        }
        assert_eq!(out.trace.len(), 5);
    }

    #[test]
    fn deterministic_reruns_are_bit_identical() {
        let config = TrainConfig {
            dim: 8,
            epochs: 10,
            batch_size: 3,
            ..Default::default()
        };
        let a = train(&toy(), &config).unwrap();
        let b = train(&toy(), &config).unwrap();
        assert_eq!(a.table.to_snapshot_text(), b.table.to_snapshot_text());
        assert_eq!(a.trace_csv(), b.trace_csv());
    }

    #[test]
    fn transe_has_zero_weighted_equivalence() {
        let config = TrainConfig {
            dim: 8,
            epochs: 3,
            ..Default::default()
        }
        .transe();
        let out = train(&toy(), &config).unwrap();
        for e in &out.trace {
            assert_eq!(e.total, config.lambda1 * e.l1);
        }
    }

    #[test]
    fn divergence_is_reported() {
        let config = TrainConfig {
            dim: 4,
            epochs: 50,
            learning_rate: 1e6,
            lambda2: 1.0,
            normalize_entities: false,
            ..Default::default()
        };
        match train(&toy(), &config) {
            Err(Error::Diverged { epoch, .. }) => assert!(epoch >= 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn empty_training_split_rejected() {
        let store = TripletStore::parse("syn:a\thave_sememe\tsem:x\ttest\n").unwrap();
        assert!(matches!(
            train(
                &store,
                &TrainConfig {
                    dim: 2,
                    ..Default::default()
                }
            )
            .unwrap_err(),
            Error::Contract(_)
        ));
    }
}
