use std::collections::BTreeSet;

use proptest::prelude::*;
use sememe_core::kge::{self, margin_loss, margin_loss_gradient};
use sememe_core::{
    fuse, EmbeddingTable, FusionConfig, NodeId, RelationId, RelationKind, ScoredRanking,
    TrainConfig, Triplet, TripletStore,
};

fn syn(i: usize) -> NodeId {
    NodeId::synset(format!("b{i}")).unwrap()
}

fn sem(i: usize) -> NodeId {
    NodeId::sememe(format!("s{i}")).unwrap()
}

/// Random mixed graph as triplet text: synset-synset, sememe-sememe and annotation edges.
fn graph_text() -> impl Strategy<Value = String> {
    let edge = (0u8..3, 0usize..8, 0usize..8, 0usize..3);
    prop::collection::vec(edge, 0..60).prop_map(|edges| {
        let mut out = String::new();
        for (kind, a, b, r) in edges {
            let line = match kind {
                0 => format!("{}\tr{r}\t{}\n", syn(a), syn(b)),
                1 => format!("{}\tq{r}\t{}\n", sem(a), sem(b)),
                _ => format!("{}\thave_sememe\t{}\n", syn(a), sem(b)),
            };
            out.push_str(&line);
        }
        out
    })
}

fn triplets(store: &TripletStore) -> BTreeSet<Triplet> {
    store.iter().map(|t| t.to_owned()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn low_frequency_filter_is_idempotent(text in graph_text(), n in 0usize..4, r in 0usize..4) {
        let store = TripletStore::parse(&text).unwrap();
        let once = store.filter_low_frequency(n, r);
        let twice = once.filter_low_frequency(n, r);
        prop_assert_eq!(triplets(&once), triplets(&twice));
        prop_assert_eq!(once.node_count(), twice.node_count());
    }

    #[test]
    fn stricter_thresholds_keep_a_subset(text in graph_text(), n in 0usize..4, r in 0usize..4) {
        let store = TripletStore::parse(&text).unwrap();
        let loose = triplets(&store.filter_low_frequency(n, r));
        let strict = triplets(&store.filter_low_frequency(n + 1, r + 1));
        prop_assert!(strict.is_subset(&loose));
    }

    #[test]
    fn surviving_nodes_meet_the_degree_threshold(text in graph_text(), n in 1usize..4) {
        let filtered = TripletStore::parse(&text).unwrap().filter_low_frequency(n, 1);
        for node in filtered.nodes() {
            prop_assert!(filtered.degree(node).unwrap() >= n);
        }
    }

    #[test]
    fn ranking_order_ignores_score_shift(
        scores in prop::collection::vec(-5.0f64..5.0, 1..20),
        shift in -100.0f64..100.0,
    ) {
        let target = syn(0);
        let base: Vec<_> = scores.iter().enumerate().map(|(i, &v)| (sem(i), v)).collect();
        let shifted: Vec<_> = base.iter().map(|(s, v)| (s.clone(), v + shift)).collect();
        let a = ScoredRanking::from_scores(target.clone(), base).unwrap();
        let b = ScoredRanking::from_scores(target, shifted).unwrap();
        // shifting can merge two nearby scores through rounding; only compare distinct gaps
        let distinct = a.entries().windows(2).all(|w| w[0].1 - w[1].1 > 1e-9);
        if distinct {
            prop_assert!(a.order().eq(b.order()));
        }
    }

    #[test]
    fn fusing_a_ranking_with_itself_keeps_its_order(scores in prop::collection::vec(-5.0f64..5.0, 1..20)) {
        let entries: Vec<_> = scores.iter().enumerate().map(|(i, &v)| (sem(i), v)).collect();
        let rr = ScoredRanking::from_scores(syn(0), entries).unwrap();
        let fused = fuse(Some(&rr), &rr, &FusionConfig::default()).unwrap();
        prop_assert!(fused.order().eq(rr.order()));
    }

    #[test]
    fn margin_loss_is_nonnegative_and_matches_its_gradient_pass(
        values in prop::collection::vec(-2.0f64..2.0, 5 * 3 + 3),
        margin in 0.0f64..5.0,
    ) {
        let dim = 3;
        let nodes: Vec<_> = (0..5)
            .map(|i| (if i < 3 { syn(i) } else { sem(i) }, values[i * dim..(i + 1) * dim].to_vec()))
            .collect();
        let rel = RelationId::new(RelationKind::SynsetSynset, "r").unwrap();
        let table = EmbeddingTable::from_vectors(dim, nodes, vec![(rel, values[15..].to_vec())]).unwrap();
        let pos = vec![Triplet::new(syn(0), "r", syn(1)).unwrap()];
        let neg = vec![Triplet::new(syn(0), "r", syn(2)).unwrap()];
        let loss = margin_loss(&table, &pos, &neg, margin).unwrap();
        let (loss2, _) = margin_loss_gradient(&table, &pos, &neg, margin).unwrap();
        prop_assert!(loss >= 0.0);
        prop_assert!((loss - loss2).abs() <= 1e-12 * loss.abs().max(1.0));
    }

    #[test]
    fn split_export_round_trips(text in graph_text(), seed in any::<u64>()) {
        let store = TripletStore::parse(&text).unwrap();
        prop_assume!(!store.annotations(sememe_core::Split::Train).is_empty());
        let split = store.split_dataset((0.6, 0.2, 0.2), seed).unwrap();
        let back = TripletStore::parse(&split.to_tsv(true)).unwrap();
        prop_assert_eq!(split.to_tsv(true), back.to_tsv(true));
    }
}

const TOY: &str = "\
syn:b0\tantonym\tsyn:b1
syn:b1\tsimilar\tsyn:b2
syn:b0\thave_sememe\tsem:s0
syn:b1\thave_sememe\tsem:s1
syn:b2\thave_sememe\tsem:s1
";

fn toy_config() -> TrainConfig {
    TrainConfig {
        dim: 8,
        epochs: 50,
        batch_size: 2,
        learning_rate: 0.01,
        deterministic: true,
        ..TrainConfig::default()
    }
}

#[test]
fn toy_graph_loss_trends_down() {
    let store = TripletStore::parse(TOY).unwrap();
    let outcome = kge::train(&store, &toy_config()).unwrap();
    assert_eq!(outcome.trace.len(), 50);
    let mean = |xs: &[kge::EpochLoss]| xs.iter().map(|e| e.total).sum::<f64>() / xs.len() as f64;
    let (head, tail) = (mean(&outcome.trace[..10]), mean(&outcome.trace[40..]));
    assert!(
        tail < head,
        "loss did not decrease: first ten {head}, last ten {tail}"
    );
    assert!(outcome.table.is_finite());
}

#[test]
fn trained_snapshot_round_trips_exactly() {
    let store = TripletStore::parse(TOY).unwrap();
    let table = kge::train(&store, &toy_config()).unwrap().table;
    let text = table.to_snapshot_text();
    let back = EmbeddingTable::parse_snapshot(&text).unwrap();
    assert_eq!(back.to_snapshot_text(), text);
    for node in table.nodes() {
        assert_eq!(table.node_vector(node), back.node_vector(node));
    }
}

#[test]
fn transe_ignores_the_equivalence_term() {
    let store = TripletStore::parse(TOY).unwrap();
    let outcome = kge::train(&store, &toy_config().transe()).unwrap();
    for e in &outcome.trace {
        assert!((e.total - 0.95 * e.l1).abs() <= 1e-9 * e.total.abs().max(1.0));
    }
}
