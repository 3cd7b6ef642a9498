//! Sememe recommendation from semantically similar annotated synsets.
//!
//! A target synset inherits the sememes of its annotated neighbours, each
//! neighbour weighted by its cosine similarity times `c^rank`, where rank is
//! the neighbour's 1-based position in descending-cosine order.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{AnnotationMap, TripletStore};
use crate::ids::NodeId;
use crate::ranking::ScoredRanking;
use crate::snapshot::{write_row, Snapshot};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrConfig {
    /// Declining confidence factor `c`, strictly between 0 and 1.
    pub decay: f64,
    /// Only the first `max_neighbors` neighbours contribute; `None` uses all.
    pub max_neighbors: Option<usize>,
}

impl Default for SrConfig {
    fn default() -> Self {
        SrConfig {
            decay: 0.8,
            max_neighbors: Some(100),
        }
    }
}

impl SrConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::Config(format!(
                "decay must lie in (0, 1), got {}",
                self.decay
            )));
        }
        if self.max_neighbors == Some(0) {
            return Err(Error::Config("neighbour cap must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-synset semantic vectors with cached norms.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticVectorStore {
    dim: usize,
    vectors: BTreeMap<NodeId, (Vec<f64>, f64)>,
}

impl SemanticVectorStore {
    pub fn new(dim: usize) -> Self {
        SemanticVectorStore {
            dim,
            vectors: BTreeMap::new(),
        }
    }

    /// Adds a vector, rejecting wrong dimensions, non-finite entries and zero vectors.
    pub fn insert(&mut self, id: NodeId, v: Vec<f64>) -> Result<()> {
        if !id.is_synset() {
            return Err(Error::Format(format!("{id} is not a synset")));
        }
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
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Validation(format!("zero semantic vector for {id}")));
        }
        if self.vectors.insert(id.clone(), (v, norm)).is_some() {
            return Err(Error::Format(format!("duplicate vector for {id}")));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let snapshot = Snapshot::parse(text)?;
        let mut store = SemanticVectorStore::new(snapshot.dim);
        let mut zero = Vec::new();
        for (id, v) in snapshot.rows {
            let node: NodeId = id.parse().map_err(Error::Format)?;
            match store.insert(node, v) {
                Err(Error::Validation(_)) => zero.push(id),
                other => other?,
            }
        }
        if !zero.is_empty() {
            return Err(Error::Validation(format!(
                "zero semantic vectors for {}",
                zero.join(", ")
            )));
        }
        Ok(store)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("D={}\n", self.dim);
        for (id, (v, _)) in &self.vectors {
            write_row(&mut out, &id.to_string(), v);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, id: &NodeId) -> Option<&[f64]> {
        self.vectors.get(id).map(|(v, _)| v.as_slice())
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.vectors.contains_key(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &NodeId> {
        self.vectors.keys()
    }

    /// Ids that have vectors but are absent from `store`. They are kept, not dropped.
    pub fn unknown_ids(&self, store: &TripletStore) -> Vec<&NodeId> {
        self.vectors
            .keys()
            .filter(|id| !store.contains_node(id))
            .collect()
    }

    pub fn cosine(&self, a: &NodeId, b: &NodeId) -> Option<f64> {
        let (va, na) = self.vectors.get(a)?;
        let (vb, nb) = self.vectors.get(b)?;
        let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
        Some(dot / (na * nb))
    }
}

/// Annotated synsets (excluding the target) by descending cosine similarity to the target.
/// Ties are broken by synset id; annotated synsets without vectors are skipped.
pub fn rank_neighbors<'a>(
    vectors: &SemanticVectorStore,
    target: &NodeId,
    annotated: impl IntoIterator<Item = &'a NodeId>,
) -> Result<Vec<(NodeId, f64)>> {
    if !vectors.contains(target) {
        return Err(Error::Coverage(target.to_string()));
    }
    let mut neighbors: Vec<(NodeId, f64)> = annotated
        .into_iter()
        .filter(|b| *b != target)
        .filter_map(|b| vectors.cosine(target, b).map(|c| (b.clone(), c)))
        .collect();
    if neighbors.is_empty() {
        return Err(Error::Contract(format!(
            "no annotated synset with a semantic vector to compare with {target}"
        )));
    }
    neighbors.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(neighbors)
}

/// `score(s) = Σ_k cos_k · c^k · [s ∈ S_k]` over the first `max_neighbors` neighbours
/// (k is 1-based). Every candidate appears in the result; unsupported ones score 0.
pub fn score_sememes_sr(
    target: &NodeId,
    neighbors: &[(NodeId, f64)],
    annotations: &AnnotationMap,
    candidates: &[NodeId],
    config: &SrConfig,
) -> Result<ScoredRanking> {
    config.validate()?;
    if neighbors.is_empty() {
        return Err(Error::Contract(format!("no neighbours for {target}")));
    }
    let mut scores: BTreeMap<&NodeId, f64> = candidates.iter().map(|s| (s, 0.0)).collect();
    let cap = config.max_neighbors.unwrap_or(usize::MAX);
    let mut weight = 1.0;
    for (neighbor, cosine) in neighbors.iter().take(cap) {
        weight *= config.decay;
        let sememes = annotations
            .get(neighbor)
            .ok_or_else(|| Error::Contract(format!("neighbour {neighbor} is not annotated")))?;
        for s in sememes {
            match scores.get_mut(s) {
                Some(v) => *v += cosine * weight,
                None => {
                    return Err(Error::Contract(format!(
                        "sememe {s} of {neighbor} is not a candidate"
                    )))
                }
            }
        }
    }
    ScoredRanking::from_scores(
        target.clone(),
        scores.into_iter().map(|(s, v)| (s.clone(), v)).collect(),
    )
}

/// Precomputed recommender over a fixed annotated set.
#[derive(Debug)]
pub struct SemanticRecommender<'a> {
    vectors: &'a SemanticVectorStore,
    annotations: &'a AnnotationMap,
    annotated: BTreeSet<&'a NodeId>,
    candidates: Vec<NodeId>,
    config: SrConfig,
}

impl<'a> SemanticRecommender<'a> {
    /// `annotations` supplies the neighbour pool: only its synsets that have vectors are used.
    pub fn new(
        vectors: &'a SemanticVectorStore,
        annotations: &'a AnnotationMap,
        candidates: Vec<NodeId>,
        config: SrConfig,
    ) -> Result<Self> {
        config.validate()?;
        let annotated = annotations
            .synsets()
            .filter(|b| vectors.contains(b))
            .collect();
        Ok(SemanticRecommender {
            vectors,
            annotations,
            annotated,
            candidates,
            config,
        })
    }

    pub fn covers(&self, target: &NodeId) -> bool {
        self.vectors.contains(target)
    }

    pub fn recommend(&self, target: &NodeId) -> Result<ScoredRanking> {
        let neighbors = rank_neighbors(self.vectors, target, self.annotated.iter().copied())?;
        score_sememes_sr(
            target,
            &neighbors,
            self.annotations,
            &self.candidates,
            &self.config,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syn(n: &str) -> NodeId {
        NodeId::synset(n).unwrap()
    }

    fn sem(n: &str) -> NodeId {
        NodeId::sememe(n).unwrap()
    }

    fn vectors(rows: &[(&str, Vec<f64>)]) -> SemanticVectorStore {
        let mut store = SemanticVectorStore::new(rows[0].1.len());
        for (id, v) in rows {
            store.insert(syn(id), v.clone()).unwrap();
        }
        store
    }

    #[test]
    fn parse_and_lookup() {
        let text = "D=2\nsyn:a\t1 0\nsyn:b\t0.5 0.25\nsyn:c\t-1 3\n";
        let store = SemanticVectorStore::parse(text).unwrap();
        assert_eq!(store.len(), 3);
        assert_eq!(store.get(&syn("b")), Some(&[0.5, 0.25][..]));
        assert_eq!(SemanticVectorStore::parse(&store.to_text()).unwrap(), store);

        let empty = SemanticVectorStore::parse("D=300\n").unwrap();
        assert_eq!((empty.dim(), empty.len()), (300, 0));
    }

    #[test]
    fn parse_errors() {
        let err = SemanticVectorStore::parse("D=2\nsyn:a\t0 0\nsyn:b\t0 0\n").unwrap_err();
        match err {
            Error::Validation(m) => assert!(m.contains("syn:a") && m.contains("syn:b")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            SemanticVectorStore::parse("D=2\nsyn:a\t1 0 0\n").unwrap_err(),
            Error::Format(_)
        ));
        assert!(SemanticVectorStore::parse("D=1\nsem:a\t1\n").is_err());
    }

    #[test]
    fn unknown_ids_are_flagged() {
        let store = TripletStore::parse("syn:a\thave_sememe\tsem:x\n").unwrap();
        let v = vectors(&[("a", vec![1.0]), ("ghost", vec![2.0])]);
        assert_eq!(v.unknown_ids(&store), vec![&syn("ghost")]);
    }

    #[test]
    fn neighbor_order_hand_values() {
        let s = 0.5f64.sqrt();
        let v = vectors(&[
            ("t", vec![1.0, 0.0]),
            ("a", vec![s, s]),
            ("b", vec![0.0, 1.0]),
        ]);
        let n = rank_neighbors(&v, &syn("t"), [&syn("b"), &syn("a"), &syn("t")]).unwrap();
        assert_eq!(n[0].0, syn("a"));
        assert!((n[0].1 - s).abs() < 1e-15);
        assert_eq!(n[1], (syn("b"), 0.0));
    }

    #[test]
    fn identical_vector_ranks_first() {
        let v = vectors(&[
            ("t", vec![3.0, 1.0]),
            ("twin", vec![3.0, 1.0]),
            ("x", vec![1.0, 3.0]),
        ]);
        let n = rank_neighbors(&v, &syn("t"), [&syn("x"), &syn("twin")]).unwrap();
        assert_eq!(n[0].0, syn("twin"));
        assert!((n[0].1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coverage_and_empty_pool_errors() {
        let v = vectors(&[("t", vec![1.0])]);
        assert!(matches!(
            rank_neighbors(&v, &syn("nope"), [&syn("t")]).unwrap_err(),
            Error::Coverage(_)
        ));
        assert!(matches!(
            rank_neighbors(&v, &syn("t"), [&syn("t")]).unwrap_err(),
            Error::Contract(_)
        ));
    }

    fn two_neighbor_fixture() -> (Vec<(NodeId, f64)>, AnnotationMap, Vec<NodeId>) {
        let neighbors = vec![(syn("b1"), 0.9), (syn("b2"), 0.5)];
        let annotations: AnnotationMap = [
            (syn("b1"), sem("s1")),
            (syn("b2"), sem("s1")),
            (syn("b2"), sem("s2")),
        ]
        .into_iter()
        .collect();
        (
            neighbors,
            annotations,
            vec![sem("s1"), sem("s2"), sem("s3")],
        )
    }

    #[test]
    fn decayed_scores_hand_values() {
        let (n, a, c) = two_neighbor_fixture();
        let config = SrConfig {
            decay: 0.8,
            max_neighbors: None,
        };
        let r = score_sememes_sr(&syn("t"), &n, &a, &c, &config).unwrap();
        assert!((r.score(&sem("s1")).unwrap() - 1.04).abs() < 1e-12);
        assert!((r.score(&sem("s2")).unwrap() - 0.32).abs() < 1e-12);
        assert_eq!(r.rank(&sem("s3")), Some(3));
        assert_eq!(r.score(&sem("s3")), Some(0.0));

        let tight = SrConfig {
            decay: 0.01,
            ..config
        };
        let r = score_sememes_sr(&syn("t"), &n, &a, &c, &tight).unwrap();
        assert!((r.score(&sem("s1")).unwrap() - 0.00905).abs() < 1e-15);
        assert!((r.score(&sem("s2")).unwrap() - 0.00005).abs() < 1e-15);
        assert_eq!(r.rank(&sem("s1")), Some(1));
    }

    #[test]
    fn single_neighbor_ties() {
        let a: AnnotationMap = [(syn("b"), sem("p")), (syn("b"), sem("q"))]
            .into_iter()
            .collect();
        let r = score_sememes_sr(
            &syn("t"),
            &[(syn("b"), 0.6)],
            &a,
            &[sem("q"), sem("p")],
            &SrConfig::default(),
        )
        .unwrap();
        assert_eq!(r.score(&sem("p")), Some(0.6 * 0.8));
        assert_eq!(r.score(&sem("q")), Some(0.6 * 0.8));
        assert_eq!(r.rank(&sem("p")), Some(1));
    }

    #[test]
    fn cap_of_one_keeps_nearest_only() {
        let (n, a, c) = two_neighbor_fixture();
        let config = SrConfig {
            decay: 0.8,
            max_neighbors: Some(1),
        };
        let r = score_sememes_sr(&syn("t"), &n, &a, &c, &config).unwrap();
        let positive: Vec<_> = r.entries().iter().filter(|(_, v)| *v > 0.0).collect();
        assert_eq!(positive.len(), 1);
        assert_eq!(positive[0].0, sem("s1"));
    }

    #[test]
    fn config_checks() {
        assert!(SrConfig {
            decay: 1.0,
            max_neighbors: None
        }
        .validate()
        .is_err());
        assert!(SrConfig {
            decay: 0.0,
            max_neighbors: None
        }
        .validate()
        .is_err());
        assert!(SrConfig {
            decay: 0.5,
            max_neighbors: Some(0)
        }
        .validate()
        .is_err());
    }
}
