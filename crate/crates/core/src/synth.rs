//! Synthetic datasets whose synset relations mirror the relations of their sememes,
//! plus naive scoring oracles for cross-checking the main models.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_distr::Normal;

use crate::error::{Error, Result};
use crate::graph::{AnnotationMap, Triplet, TripletStore};
use crate::ids::{NodeId, Pos, Split, HAVE_SEMEME};
use crate::recommend::SemanticVectorStore;
use crate::rng::SeededRng;

pub const ANTONYM: &str = "antonym";
pub const HYPERNYM: &str = "hypernym";
pub const HYPONYM: &str = "hyponym";

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_sememes: usize,
    pub n_synsets: usize,
    /// Inclusive range of sememe-set sizes.
    pub sememes_per_synset: (usize, usize),
    pub n_antonym_pairs: usize,
    pub n_hypernym_edges: usize,
    pub vector_dim: usize,
    pub noise: f64,
    pub seed: u64,
    /// Probability that a drawn sememe set seeds an antonym family.
    pub twin_fraction: f64,
    /// Antonym swaps per family; a family of m swaps holds 2^m synsets.
    pub family_swaps: usize,
    /// Share of synsets tagged verb/adj/adv; those get no semantic vector.
    pub non_nominal_fraction: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_sememes: 40,
            n_synsets: 300,
            sememes_per_synset: (1, 5),
            n_antonym_pairs: 8,
            n_hypernym_edges: 30,
            vector_dim: 64,
            noise: 0.05,
            seed: 7,
            twin_fraction: 1.0,
            family_swaps: 2,
            non_nominal_fraction: 0.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let (lo, hi) = self.sememes_per_synset;
        if self.n_synsets > 0 && (lo < 1 || lo > hi || hi > self.n_sememes) {
            return bad(format!(
                "sememes_per_synset {lo}..={hi} must lie within 1..={}",
                self.n_sememes
            ));
        }
        if 2 * self.n_antonym_pairs > self.n_sememes {
            return bad(format!(
                "{} antonym pairs need {} sememes, only {} configured",
                self.n_antonym_pairs,
                2 * self.n_antonym_pairs,
                self.n_sememes
            ));
        }
        let max_edges = self.n_sememes * self.n_sememes.saturating_sub(1) / 2;
        if self.n_hypernym_edges > max_edges {
            return bad(format!(
                "{} hypernym edges exceed the {max_edges} possible among {} sememes",
                self.n_hypernym_edges, self.n_sememes
            ));
        }
        if self.vector_dim == 0 {
            return bad("vector_dim must be at least 1".into());
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return bad(format!("noise must be finite and >= 0, got {}", self.noise));
        }
        for (name, p) in [
            ("twin_fraction", self.twin_fraction),
            ("non_nominal_fraction", self.non_nominal_fraction),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    /// All triplets in the train split; run `split_dataset` to hold synsets out.
    pub store: TripletStore,
    pub vectors: SemanticVectorStore,
    pub gold: AnnotationMap,
}

pub fn sememe_name(i: usize) -> NodeId {
    NodeId::sememe(format!("s{i:03}")).expect("valid sememe name")
}

fn synset_name(i: usize, pos: Pos) -> NodeId {
    let suffix = match pos {
        Pos::Verb => 'v',
        Pos::Adj => 'a',
        Pos::Adv => 'r',
        _ => 'n',
    };
    NodeId::synset(format!("bn:{i:08}{suffix}")).expect("valid synset name")
}

/// Truncated geometric weights over `lo..=hi`, peaking at 2.
fn size_weights(lo: usize, hi: usize) -> Vec<f64> {
    let peak = 2usize.clamp(lo, hi);
    (lo..=hi)
        .map(|k| 0.5f64.powi(k.abs_diff(peak) as i32))
        .collect()
}

fn base_vectors(n: usize, dim: usize, rng: &mut SeededRng) -> Vec<Vec<f64>> {
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut bases: Vec<Vec<f64>> = Vec::with_capacity(n);
    while bases.len() < n {
        let mut v: Vec<f64> = (0..dim).map(|_| normal.sample(rng)).collect();
        if dim >= n {
            // Gram-Schmidt against the bases drawn so far
            for b in &bases {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            bases.push(v);
        }
    }
    bases
}

fn order_pairs(antonym_of: &HashMap<usize, usize>) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = antonym_of
        .iter()
        .filter(|(a, b)| a < b)
        .map(|(&a, &b)| (a, b))
        .collect();
    pairs.sort_unstable();
    pairs
}

pub fn generate(config: &SynthConfig) -> Result<SynthDataset> {
    config.validate()?;
    if config.n_synsets == 0 {
        return Ok(SynthDataset {
            store: TripletStore::default(),
            vectors: SemanticVectorStore::new(config.vector_dim),
            gold: AnnotationMap::new(),
        });
    }
    let mut rng = SeededRng::seed_from_u64(config.seed);
    let n = config.n_sememes;
    let mut builder = TripletStore::builder();
    let add = |builder: &mut crate::graph::StoreBuilder, h: NodeId, r: &str, t: NodeId| {
        builder.add_triplet(Triplet::new(h, r, t)?, Split::Train)
    };

    // sememe-sememe relations
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut antonym_of: HashMap<usize, usize> = HashMap::new();
    for pair in order[..2 * config.n_antonym_pairs].chunks(2) {
        antonym_of.insert(pair[0], pair[1]);
        antonym_of.insert(pair[1], pair[0]);
        add(
            &mut builder,
            sememe_name(pair[0]),
            ANTONYM,
            sememe_name(pair[1]),
        )?;
        add(
            &mut builder,
            sememe_name(pair[1]),
            ANTONYM,
            sememe_name(pair[0]),
        )?;
    }
    // hypernym edges point forward in a random topological order, so they form a DAG
    order.shuffle(&mut rng);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(&mut rng);
    for &(i, j) in &pairs[..config.n_hypernym_edges] {
        let (hyper, hypo) = (sememe_name(order[i]), sememe_name(order[j]));
        add(&mut builder, hypo.clone(), HYPERNYM, hyper.clone())?;
        add(&mut builder, hyper, HYPONYM, hypo)?;
    }

    // sememe sets, optionally in antonym families: a base set holding one member of each
    // of m antonym pairs, plus every variant obtained by swapping members for partners
    let (lo, hi) = config.sememes_per_synset;
    let sizes = WeightedIndex::new(size_weights(lo, hi)).expect("positive weights");
    let antonym_pairs: Vec<(usize, usize)> = order_pairs(&antonym_of);
    let mut sets: Vec<BTreeSet<usize>> = Vec::with_capacity(config.n_synsets);
    while sets.len() < config.n_synsets {
        let size = lo + sizes.sample(&mut rng);
        let room = config.n_synsets - sets.len();
        let mut m = 0;
        if rng.random_bool(config.twin_fraction) {
            while m < config.family_swaps
                && m < antonym_pairs.len()
                && m < size
                && size + m < n
                && (2usize << m) <= room
            {
                m += 1;
            }
        }
        let chosen: Vec<(usize, usize)> = antonym_pairs
            .choose_multiple(&mut rng, m)
            .map(|&(a, b)| if rng.random_bool(0.5) { (a, b) } else { (b, a) })
            .collect();
        let reserved: BTreeSet<usize> = chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
        let pool: Vec<usize> = (0..n).filter(|s| !reserved.contains(s)).collect();
        let rest: Vec<usize> = pool.choose_multiple(&mut rng, size - m).copied().collect();
        for mask in 0..1usize << m {
            let mut set: BTreeSet<usize> = rest.iter().copied().collect();
            for (bit, &(a, b)) in chosen.iter().enumerate() {
                set.insert(if mask >> bit & 1 == 0 { a } else { b });
            }
            sets.push(set);
        }
    }

    let mut gold = AnnotationMap::new();
    let mut synsets = Vec::with_capacity(sets.len());
    for (i, set) in sets.iter().enumerate() {
        let pos = if rng.random_bool(config.non_nominal_fraction) {
            *[Pos::Verb, Pos::Adj, Pos::Adv]
                .choose(&mut rng)
                .expect("non-empty")
        } else {
            Pos::Noun
        };
        let id = synset_name(i, pos);
        builder.add_node(id.clone());
        builder.set_pos(id.clone(), pos)?;
        for &s in set {
            gold.insert(id.clone(), sememe_name(s));
            add(&mut builder, id.clone(), HAVE_SEMEME, sememe_name(s))?;
        }
        synsets.push((id, pos));
    }

    // synset antonym edges: every pair whose sets differ by exactly one antonym pair
    let mut by_set: HashMap<&BTreeSet<usize>, Vec<usize>> = HashMap::new();
    for (i, set) in sets.iter().enumerate() {
        by_set.entry(set).or_default().push(i);
    }
    for (i, set) in sets.iter().enumerate() {
        for &a in set {
            let partner = antonym_of.get(&a).copied();
            let Some(partner) = partner.filter(|p| !set.contains(p)) else {
                continue;
            };
            let mut key = set.clone();
            key.remove(&a);
            key.insert(partner);
            for &j in by_set.get(&key).into_iter().flatten() {
                add(
                    &mut builder,
                    synsets[i].0.clone(),
                    ANTONYM,
                    synsets[j].0.clone(),
                )?;
            }
        }
    }
    let store = builder.build()?;

    let bases = base_vectors(n, config.vector_dim, &mut rng);
    let noise = Normal::new(0.0, config.noise.max(f64::MIN_POSITIVE)).expect("valid sigma");
    let mut vectors = SemanticVectorStore::new(config.vector_dim);
    for ((id, pos), set) in synsets.iter().zip(&sets) {
        let mut v = vec![0.0; config.vector_dim];
        for &s in set {
            v.iter_mut().zip(&bases[s]).for_each(|(x, b)| *x += b);
        }
        if config.noise > 0.0 {
            v.iter_mut().for_each(|x| *x += noise.sample(&mut rng));
        }
        if *pos == Pos::Noun {
            vectors.insert(id.clone(), v)?;
        }
    }

    let dataset = SynthDataset {
        store,
        vectors,
        gold,
    };
    let violations = check_consistency(&dataset);
    if !violations.is_empty() {
        return Err(Error::Contract(format!(
            "generated dataset violates the antonym rule: {}",
            violations.join("; ")
        )));
    }
    Ok(dataset)
}

/// Every synset-synset antonym edge must join synsets whose sememe sets differ by
/// exactly one sememe antonym pair. Returns one message per violating edge.
pub fn check_consistency(dataset: &SynthDataset) -> Vec<String> {
    let antonyms: BTreeSet<(NodeId, NodeId)> = dataset
        .store
        .iter()
        .filter(|t| t.head.is_sememe() && t.relation.name() == ANTONYM)
        .map(|t| (t.head.clone(), t.tail.clone()))
        .collect();
    let empty = BTreeSet::new();
    let mut out = Vec::new();
    for t in dataset.store.iter() {
        if !(t.head.is_synset() && t.tail.is_synset() && t.relation.name() == ANTONYM) {
            continue;
        }
        let a = dataset.gold.get(t.head).unwrap_or(&empty);
        let b = dataset.gold.get(t.tail).unwrap_or(&empty);
        let only_a: Vec<&NodeId> = a.difference(b).collect();
        let only_b: Vec<&NodeId> = b.difference(a).collect();
        let ok = only_a.len() == 1
            && only_b.len() == 1
            && antonyms.contains(&(only_a[0].clone(), only_b[0].clone()));
        if !ok {
            out.push(format!("{} {ANTONYM} {}", t.head, t.tail));
        }
    }
    out
}

/// Gold annotations as `synset<TAB>sememe` lines.
pub fn gold_tsv(gold: &AnnotationMap) -> String {
    let mut out = String::new();
    for (synset, sememes) in gold.iter() {
        for s in sememes {
            out.push_str(&format!("{synset}\t{s}\n"));
        }
    }
    out
}

/// Naive recomputation of the SR score: cosine by explicit loops, neighbours ordered by
/// (cosine desc, id asc), confidence `decay^rank` with 1-based ranks.
/// `annotated` holds (id, vector, sememes); the target is skipped by id.
pub fn oracle_sr_scores(
    target: (&str, &[f64]),
    annotated: &[(String, Vec<f64>, Vec<String>)],
    candidates: &[String],
    decay: f64,
    max_neighbors: Option<usize>,
) -> Vec<(String, f64)> {
    let cos = |x: &[f64], y: &[f64]| {
        let mut dot = 0.0;
        let mut nx = 0.0;
        let mut ny = 0.0;
        for i in 0..x.len() {
            dot += x[i] * y[i];
            nx += x[i] * x[i];
            ny += y[i] * y[i];
        }
        dot / (nx.sqrt() * ny.sqrt())
    };
    let mut neighbors: Vec<(&str, f64, &[String])> = Vec::new();
    for (id, v, sememes) in annotated {
        if id != target.0 {
            neighbors.push((id, cos(target.1, v), sememes));
        }
    }
    neighbors.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(b.0)));
    let k = max_neighbors
        .unwrap_or(neighbors.len())
        .min(neighbors.len());
    let mut out = Vec::new();
    for c in candidates {
        let mut score = 0.0;
        for (r, (_, cosine, sememes)) in neighbors[..k].iter().enumerate() {
            if sememes.iter().any(|s| s == c) {
                score += cosine * decay.powi(r as i32 + 1);
            }
        }
        out.push((c.clone(), score));
    }
    out
}

/// Naive recomputation of the translational score `−Σ (b_i + r_i − s_i)²`.
pub fn oracle_rr_scores(
    synset: &[f64],
    relation: &[f64],
    candidates: &[(String, Vec<f64>)],
) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (id, s) in candidates {
        let mut d = 0.0;
        for i in 0..synset.len() {
            let x = synset[i] + relation[i] - s[i];
            d += x * x;
        }
        out.push((id.clone(), -d));
    }
    out
}

/// Sememe-set sizes of the gold map, for distribution checks.
pub fn size_histogram(gold: &AnnotationMap) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for (_, s) in gold.iter() {
        *h.entry(s.len()).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_synsets_is_empty() {
        let d = generate(&SynthConfig {
            n_synsets: 0,
            ..Default::default()
        })
        .unwrap();
        assert!(d.store.is_empty() && d.vectors.is_empty() && d.gold.is_empty());
    }

    #[test]
    fn same_seed_same_files() {
        let config = SynthConfig::default();
        let a = generate(&config).unwrap();
        let b = generate(&config).unwrap();
        assert_eq!(a.store.to_tsv(false), b.store.to_tsv(false));
        assert_eq!(a.vectors.to_text(), b.vectors.to_text());
        let c = generate(&SynthConfig { seed: 8, ..config }).unwrap();
        assert_ne!(a.store.to_tsv(false), c.store.to_tsv(false));
    }

    #[test]
    fn construction_invariants() {
        let config = SynthConfig::default();
        let d = generate(&config).unwrap();
        assert!(check_consistency(&d).is_empty());
        assert_eq!(d.gold.len(), 300);
        for (_, s) in d.gold.iter() {
            assert!((1..=5).contains(&s.len()));
        }
        let hist = size_histogram(&d.gold);
        let mode = hist.iter().max_by_key(|(_, c)| **c).unwrap().0;
        assert_eq!(*mode, 2);
        let synset_antonyms = d
            .store
            .iter()
            .filter(|t| t.head.is_synset() && t.tail.is_synset())
            .count();
        assert!(synset_antonyms > 0);
        // round-trips through the loaders
        let reparsed =
            TripletStore::parse_with_pos(&d.store.to_tsv(false), Some(&d.store.pos_tsv())).unwrap();
        assert_eq!(reparsed, d.store);
        assert_eq!(
            SemanticVectorStore::parse(&d.vectors.to_text()).unwrap(),
            d.vectors
        );
    }

    #[test]
    fn consistency_check_catches_bad_edges() {
        let mut d = generate(&SynthConfig {
            n_synsets: 4,
            twin_fraction: 0.0,
            ..Default::default()
        })
        .unwrap();
        let mut text = d.store.to_tsv(false);
        let ids: Vec<String> = d.gold.synsets().map(|s| s.to_string()).collect();
        text.push_str(&format!("{}\t{ANTONYM}\t{}\n", ids[0], ids[1]));
        d.store = TripletStore::parse(&text).unwrap();
        assert_eq!(check_consistency(&d).len(), 1);
    }

    #[test]
    fn noise_free_near_duplicates_share_a_sememe() {
        let d = generate(&SynthConfig {
            noise: 0.0,
            ..Default::default()
        })
        .unwrap();
        let ids: Vec<&NodeId> = d.vectors.ids().collect();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                if d.vectors.cosine(a, b).unwrap() > 0.99 {
                    assert!(!d.gold.get(a).unwrap().is_disjoint(d.gold.get(b).unwrap()));
                }
            }
        }
    }

    #[test]
    fn non_nominal_synsets_lack_vectors() {
        let d = generate(&SynthConfig {
            non_nominal_fraction: 0.5,
            ..Default::default()
        })
        .unwrap();
        let nominal = d
            .gold
            .synsets()
            .filter(|s| d.store.pos(s) == Some(Pos::Noun))
            .count();
        assert_eq!(d.vectors.len(), nominal);
        assert!(nominal < 300 && nominal > 0);
    }

    #[test]
    fn infeasible_configs_rejected() {
        for bad in [
            SynthConfig {
                n_antonym_pairs: 21,
                ..Default::default()
            },
            SynthConfig {
                sememes_per_synset: (0, 3),
                ..Default::default()
            },
            SynthConfig {
                sememes_per_synset: (3, 41),
                ..Default::default()
            },
            SynthConfig {
                n_hypernym_edges: 781,
                ..Default::default()
            },
            SynthConfig {
                noise: -1.0,
                ..Default::default()
            },
            SynthConfig {
                vector_dim: 0,
                ..Default::default()
            },
        ] {
            assert!(generate(&bad).unwrap_err().is_config(), "{bad:?}");
        }
    }

    #[test]
    fn oracle_forced_winner() {
        let scores = oracle_rr_scores(
            &[1.0, 0.0],
            &[0.0, 1.0],
            &[
                ("sem:x".into(), vec![1.0, 1.0]),
                ("sem:y".into(), vec![0.0, 0.0]),
            ],
        );
        assert_eq!(scores[0].1, 0.0);
        assert_eq!(scores[1].1, -2.0);
    }
}
