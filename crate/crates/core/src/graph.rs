//! Heterogeneous synset/sememe triplet store.
//!
//! The store is immutable once built. Filtering and splitting return new
//! stores that keep the original node and triplet order, so every derived
//! artifact is reproducible from the same input file.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::ids::{NodeId, NodeKind, Pos, RelationId, RelationKind, Split, HAVE_SEMEME};
use crate::rng::SeededRng;

/// Owned triplet. Use [`TripletStore::iter`] for borrowed access.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplet {
    pub head: NodeId,
    pub relation: RelationId,
    pub tail: NodeId,
}

impl Triplet {
    /// Builds a triplet, deriving the relation kind from the endpoint kinds.
    pub fn new(head: NodeId, relation: &str, tail: NodeId) -> Result<Self> {
        let kind = match (head.kind(), tail.kind()) {
            (NodeKind::Synset, NodeKind::Synset) => RelationKind::SynsetSynset,
            (NodeKind::Sememe, NodeKind::Sememe) => RelationKind::SememeSememe,
            (NodeKind::Synset, NodeKind::Sememe) => RelationKind::HaveSememe,
            (NodeKind::Sememe, NodeKind::Synset) => {
                return Err(Error::Validation(format!(
                    "triplet ({head}, {relation}, {tail}) has a sememe head and a synset tail"
                )))
            }
        };
        if relation == HAVE_SEMEME && kind != RelationKind::HaveSememe {
            return Err(Error::Validation(format!(
                "{HAVE_SEMEME} must link a synset head to a sememe tail, got ({head}, {tail})"
            )));
        }
        let relation = RelationId::new(kind, relation)?;
        Ok(Triplet {
            head,
            relation,
            tail,
        })
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.head, self.relation.name(), self.tail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Edge {
    pub head: usize,
    pub relation: usize,
    pub tail: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct TripletRef<'a> {
    pub head: &'a NodeId,
    pub relation: &'a RelationId,
    pub tail: &'a NodeId,
    pub split: Split,
}

impl TripletRef<'_> {
    pub fn to_owned(&self) -> Triplet {
        Triplet {
            head: self.head.clone(),
            relation: self.relation.clone(),
            tail: self.tail.clone(),
        }
    }
}

/// Sememe annotations of synsets, restricted to one split.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationMap {
    inner: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl AnnotationMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, synset: NodeId, sememe: NodeId) {
        self.inner.entry(synset).or_default().insert(sememe);
    }

    pub fn get(&self, synset: &NodeId) -> Option<&BTreeSet<NodeId>> {
        self.inner.get(synset)
    }

    pub fn contains(&self, synset: &NodeId) -> bool {
        self.inner.contains_key(synset)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, &BTreeSet<NodeId>)> {
        self.inner.iter()
    }

    pub fn synsets(&self) -> impl Iterator<Item = &NodeId> {
        self.inner.keys()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    /// Union of all annotated sememes.
    pub fn sememes(&self) -> BTreeSet<NodeId> {
        self.inner.values().flatten().cloned().collect()
    }
}

impl FromIterator<(NodeId, NodeId)> for AnnotationMap {
    fn from_iter<I: IntoIterator<Item = (NodeId, NodeId)>>(iter: I) -> Self {
        let mut map = AnnotationMap::new();
        for (b, s) in iter {
            map.insert(b, s);
        }
        map
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StoreCounts {
    pub triplets: usize,
    pub synsets: usize,
    pub sememes: usize,
    pub synset_synset: usize,
    pub sememe_sememe: usize,
    pub synset_sememe: usize,
    pub synset_relations: usize,
    pub sememe_relations: usize,
    pub have_relations: usize,
    pub train: usize,
    pub valid: usize,
    pub test: usize,
}

impl fmt::Display for StoreCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "triplets\t{}", self.triplets)?;
        writeln!(f, "synsets\t{}", self.synsets)?;
        writeln!(f, "sememes\t{}", self.sememes)?;
        writeln!(f, "synset-synset triplets\t{}", self.synset_synset)?;
        writeln!(f, "sememe-sememe triplets\t{}", self.sememe_sememe)?;
        writeln!(f, "synset-sememe triplets\t{}", self.synset_sememe)?;
        writeln!(f, "synset-synset relations\t{}", self.synset_relations)?;
        writeln!(f, "sememe-sememe relations\t{}", self.sememe_relations)?;
        writeln!(f, "synset-sememe relations\t{}", self.have_relations)?;
        writeln!(f, "train triplets\t{}", self.train)?;
        writeln!(f, "valid triplets\t{}", self.valid)?;
        write!(f, "test triplets\t{}", self.test)
    }
}

/// Incremental constructor for [`TripletStore`].
#[derive(Debug, Default)]
pub struct StoreBuilder {
    nodes: Vec<NodeId>,
    node_index: HashMap<NodeId, usize>,
    pos: Vec<Pos>,
    relations: Vec<RelationId>,
    relation_index: HashMap<RelationId, usize>,
    edges: Vec<Edge>,
    splits: Vec<Split>,
    edge_index: HashMap<Edge, usize>,
    duplicates: usize,
}

impl StoreBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: NodeId) -> usize {
        if let Some(&i) = self.node_index.get(&node) {
            return i;
        }
        let i = self.nodes.len();
        self.node_index.insert(node.clone(), i);
        self.nodes.push(node);
        self.pos.push(Pos::Unknown);
        i
    }

    pub fn set_pos(&mut self, node: NodeId, pos: Pos) -> Result<()> {
        if node.is_sememe() && pos != Pos::Unknown {
            return Err(Error::Validation(format!(
                "sememe {node} cannot carry POS tag {pos}"
            )));
        }
        let i = self.add_node(node);
        self.pos[i] = pos;
        Ok(())
    }

    fn add_relation(&mut self, relation: RelationId) -> usize {
        if let Some(&i) = self.relation_index.get(&relation) {
            return i;
        }
        let i = self.relations.len();
        self.relation_index.insert(relation.clone(), i);
        self.relations.push(relation);
        i
    }

    /// Adds a triplet. Returns `Ok(false)` when it was already present with the same split.
    pub fn add_triplet(&mut self, triplet: Triplet, split: Split) -> Result<bool> {
        if split != Split::Train && triplet.relation.kind() != RelationKind::HaveSememe {
            return Err(Error::Validation(format!(
                "only {HAVE_SEMEME} triplets may be held out, got ({triplet}) in {split}"
            )));
        }
        let head = self.add_node(triplet.head);
        let tail = self.add_node(triplet.tail);
        let relation = self.add_relation(triplet.relation);
        let edge = Edge {
            head,
            relation,
            tail,
        };
        if let Some(&existing) = self.edge_index.get(&edge) {
            if self.splits[existing] != split {
                return Err(Error::Validation(format!(
                    "triplet ({}, {}, {}) listed in both {} and {split}",
                    self.nodes[head],
                    self.relations[relation].name(),
                    self.nodes[tail],
                    self.splits[existing]
                )));
            }
            self.duplicates += 1;
            return Ok(false);
        }
        self.edge_index.insert(edge, self.edges.len());
        self.edges.push(edge);
        self.splits.push(split);
        Ok(true)
    }

    pub fn build(self) -> Result<TripletStore> {
        if self.duplicates > 0 {
            log::info!("dropped {} duplicate triplets", self.duplicates);
        }
        // all HaveSememe triplets of one synset must share a split
        let mut synset_split: HashMap<usize, Split> = HashMap::new();
        for (edge, &split) in self.edges.iter().zip(&self.splits) {
            if self.relations[edge.relation].kind() != RelationKind::HaveSememe {
                continue;
            }
            match synset_split.get(&edge.head) {
                Some(&s) if s != split => {
                    return Err(Error::Validation(format!(
                        "synset {} has {HAVE_SEMEME} triplets in both {s} and {split}",
                        self.nodes[edge.head]
                    )))
                }
                _ => {
                    synset_split.insert(edge.head, split);
                }
            }
        }
        let mut degrees = vec![0usize; self.nodes.len()];
        for edge in &self.edges {
            degrees[edge.head] += 1;
            degrees[edge.tail] += 1;
        }
        Ok(TripletStore {
            nodes: self.nodes,
            node_index: self.node_index,
            pos: self.pos,
            relations: self.relations,
            relation_index: self.relation_index,
            edges: self.edges,
            splits: self.splits,
            edge_index: self.edge_index,
            degrees,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct TripletStore {
    nodes: Vec<NodeId>,
    node_index: HashMap<NodeId, usize>,
    pos: Vec<Pos>,
    relations: Vec<RelationId>,
    relation_index: HashMap<RelationId, usize>,
    edges: Vec<Edge>,
    splits: Vec<Split>,
    edge_index: HashMap<Edge, usize>,
    degrees: Vec<usize>,
}

/// Semantic equality: same nodes with the same POS tags, same triplets with the same splits.
impl PartialEq for TripletStore {
    fn eq(&self, other: &Self) -> bool {
        let nodes = |s: &TripletStore| -> BTreeMap<NodeId, Pos> {
            s.nodes.iter().cloned().zip(s.pos.iter().copied()).collect()
        };
        let triplets = |s: &TripletStore| -> BTreeMap<Triplet, Split> {
            s.iter().map(|t| (t.to_owned(), t.split)).collect()
        };
        self.len() == other.len()
            && self.nodes.len() == other.nodes.len()
            && nodes(self) == nodes(other)
            && triplets(self) == triplets(other)
    }
}

impl TripletStore {
    pub fn builder() -> StoreBuilder {
        StoreBuilder::new()
    }

    /// Parses a triplet file body. Lines have three TAB-separated fields, or four for a
    /// split export; comment lines start with `#`; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut builder = StoreBuilder::new();
        parse_triplets_into(&mut builder, text)?;
        builder.build()
    }

    /// Parses a triplet file body plus an optional POS file body.
    pub fn parse_with_pos(text: &str, pos_text: Option<&str>) -> Result<Self> {
        let mut builder = StoreBuilder::new();
        parse_triplets_into(&mut builder, text)?;
        if let Some(pos_text) = pos_text {
            for (node, pos) in parse_pos(pos_text)? {
                builder.set_pos(node, pos)?;
            }
        }
        builder.build()
    }

    pub fn load_triplets(path: &Path, pos_path: Option<&Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let pos_text = pos_path.map(fs::read_to_string).transpose()?;
        Self::parse_with_pos(&text, pos_text.as_deref())
    }

    /// Serializes triplets, optionally with the split column.
    pub fn to_tsv(&self, with_split: bool) -> String {
        let mut out = String::new();
        for t in self.iter() {
            out.push_str(&format!("{}\t{}\t{}", t.head, t.relation.name(), t.tail));
            if with_split {
                out.push('\t');
                out.push_str(t.split.as_str());
            }
            out.push('\n');
        }
        out
    }

    /// Serializes POS tags of every synset, plus isolated sememes (tagged `unknown`)
    /// so that a reload reproduces the node set.
    pub fn pos_tsv(&self) -> String {
        let mut out = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.is_synset() || self.degrees[i] == 0 {
                out.push_str(&format!("{node}\t{}\n", self.pos[i]));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn relations(&self) -> &[RelationId] {
        &self.relations
    }

    pub fn synsets(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter().filter(|n| n.is_synset())
    }

    pub fn sememes(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter().filter(|n| n.is_sememe())
    }

    pub fn contains_node(&self, node: &NodeId) -> bool {
        self.node_index.contains_key(node)
    }

    pub fn iter(&self) -> impl Iterator<Item = TripletRef<'_>> + '_ {
        self.edges
            .iter()
            .zip(&self.splits)
            .map(move |(e, &split)| TripletRef {
                head: &self.nodes[e.head],
                relation: &self.relations[e.relation],
                tail: &self.nodes[e.tail],
                split,
            })
    }

    pub fn split_of(&self, triplet: &Triplet) -> Option<Split> {
        let edge = self.edge_of(triplet)?;
        self.edge_index.get(&edge).map(|&i| self.splits[i])
    }

    pub fn contains(&self, triplet: &Triplet) -> bool {
        self.split_of(triplet).is_some()
    }

    pub fn pos(&self, node: &NodeId) -> Option<Pos> {
        self.node_index.get(node).map(|&i| self.pos[i])
    }

    /// Number of triplets in which `node` is the head or the tail, across all splits.
    pub fn degree(&self, node: &NodeId) -> Result<usize> {
        self.node_index
            .get(node)
            .map(|&i| self.degrees[i])
            .ok_or_else(|| Error::Lookup(node.to_string()))
    }

    pub fn counts(&self) -> StoreCounts {
        let mut c = StoreCounts {
            triplets: self.edges.len(),
            synsets: self.synsets().count(),
            sememes: self.sememes().count(),
            ..Default::default()
        };
        for (edge, split) in self.edges.iter().zip(&self.splits) {
            match self.relations[edge.relation].kind() {
                RelationKind::SynsetSynset => c.synset_synset += 1,
                RelationKind::SememeSememe => c.sememe_sememe += 1,
                RelationKind::HaveSememe => c.synset_sememe += 1,
                RelationKind::SemanticEquivalence => {}
            }
            match split {
                Split::Train => c.train += 1,
                Split::Valid => c.valid += 1,
                Split::Test => c.test += 1,
            }
        }
        for r in &self.relations {
            match r.kind() {
                RelationKind::SynsetSynset => c.synset_relations += 1,
                RelationKind::SememeSememe => c.sememe_relations += 1,
                RelationKind::HaveSememe => c.have_relations += 1,
                RelationKind::SemanticEquivalence => {}
            }
        }
        c
    }

    /// Gold sememe sets of synsets whose `have_sememe` triplets are in `split`.
    pub fn annotations(&self, split: Split) -> AnnotationMap {
        let mut map = AnnotationMap::new();
        for t in self.iter() {
            if t.split == split && t.relation.kind() == RelationKind::HaveSememe {
                map.insert(t.head.clone(), t.tail.clone());
            }
        }
        map
    }

    /// Iteratively drops nodes with degree below `min_node_degree` and relations with fewer
    /// than `min_relation_count` triplets, together with their triplets, until nothing changes.
    pub fn filter_low_frequency(&self, min_node_degree: usize, min_relation_count: usize) -> Self {
        let mut keep_node = vec![true; self.nodes.len()];
        let mut keep_edge = vec![true; self.edges.len()];
        loop {
            let mut degree = vec![0usize; self.nodes.len()];
            let mut rel_count = vec![0usize; self.relations.len()];
            for (e, _) in self.edges.iter().zip(&keep_edge).filter(|(_, &k)| k) {
                degree[e.head] += 1;
                degree[e.tail] += 1;
                rel_count[e.relation] += 1;
            }
            let mut changed = false;
            for (i, keep) in keep_node.iter_mut().enumerate() {
                if *keep && degree[i] < min_node_degree {
                    *keep = false;
                    changed = true;
                }
            }
            for (e, keep) in self.edges.iter().zip(keep_edge.iter_mut()) {
                if *keep
                    && (!keep_node[e.head]
                        || !keep_node[e.tail]
                        || rel_count[e.relation] < min_relation_count)
                {
                    *keep = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.subset(&keep_node, &keep_edge, None)
    }

    /// Randomly partitions annotated synsets by `ratios` (train, valid, test). The
    /// `have_sememe` triplets of valid/test synsets are held out; every other triplet is
    /// assigned to train.
    pub fn split_dataset(&self, ratios: (f64, f64, f64), seed: u64) -> Result<Self> {
        let (r_train, r_valid, r_test) = ratios;
        if [r_train, r_valid, r_test]
            .iter()
            .any(|r| !r.is_finite() || *r < 0.0)
            || (r_train + r_valid + r_test - 1.0).abs() > 1e-9
        {
            return Err(Error::Config(format!(
                "split ratios {r_train}, {r_valid}, {r_test} must be non-negative and sum to 1"
            )));
        }
        let have: Vec<bool> = self
            .relations
            .iter()
            .map(|r| r.kind() == RelationKind::HaveSememe)
            .collect();
        let mut annotated = vec![false; self.nodes.len()];
        for e in &self.edges {
            if have[e.relation] {
                annotated[e.head] = true;
            }
        }
        let mut synsets: Vec<usize> = (0..self.nodes.len()).filter(|&i| annotated[i]).collect();
        if synsets.is_empty() {
            return Err(Error::Contract("no annotated synsets to split".into()));
        }
        let mut rng = SeededRng::seed_from_u64(seed);
        synsets.shuffle(&mut rng);

        let n = synsets.len();
        let n_train = ((n as f64) * r_train).round().min(n as f64) as usize;
        let n_valid = (((n as f64) * r_valid).round() as usize).min(n - n_train);
        let mut synset_split = vec![Split::Train; self.nodes.len()];
        for (pos, &i) in synsets.iter().enumerate() {
            synset_split[i] = if pos < n_train {
                Split::Train
            } else if pos < n_train + n_valid {
                Split::Valid
            } else {
                Split::Test
            };
        }
        let splits = self
            .edges
            .iter()
            .map(|e| {
                if have[e.relation] {
                    synset_split[e.head]
                } else {
                    Split::Train
                }
            })
            .collect::<Vec<_>>();
        Ok(self.subset(
            &vec![true; self.nodes.len()],
            &vec![true; self.edges.len()],
            Some(&splits),
        ))
    }

    /// Removes synsets whose POS tag is not in `keep`, with every triplet touching them.
    pub fn filter_by_pos(&self, keep: &BTreeSet<Pos>) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::Config("POS filter keeps no tags".into()));
        }
        let keep_node: Vec<bool> = self
            .nodes
            .iter()
            .zip(&self.pos)
            .map(|(n, p)| n.is_sememe() || keep.contains(p))
            .collect();
        Ok(self.subset(&keep_node, &vec![true; self.edges.len()], None))
    }

    fn subset(&self, keep_node: &[bool], keep_edge: &[bool], splits: Option<&[Split]>) -> Self {
        let mut b = StoreBuilder::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if keep_node[i] {
                let j = b.add_node(node.clone());
                b.pos[j] = self.pos[i];
            }
        }
        for (k, e) in self.edges.iter().enumerate() {
            if keep_edge[k] && keep_node[e.head] && keep_node[e.tail] {
                let split = splits.map_or(self.splits[k], |s| s[k]);
                let triplet = Triplet {
                    head: self.nodes[e.head].clone(),
                    relation: self.relations[e.relation].clone(),
                    tail: self.nodes[e.tail].clone(),
                };
                b.add_triplet(triplet, split)
                    .expect("subset of a valid store is valid");
            }
        }
        b.build().expect("subset of a valid store is valid")
    }

    fn edge_of(&self, t: &Triplet) -> Option<Edge> {
        Some(Edge {
            head: *self.node_index.get(&t.head)?,
            relation: *self.relation_index.get(&t.relation)?,
            tail: *self.node_index.get(&t.tail)?,
        })
    }

    pub(crate) fn node_idx(&self, node: &NodeId) -> Option<usize> {
        self.node_index.get(node).copied()
    }

    pub(crate) fn relation_idx(&self, relation: &RelationId) -> Option<usize> {
        self.relation_index.get(relation).copied()
    }

    pub(crate) fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub(crate) fn edge_splits(&self) -> &[Split] {
        &self.splits
    }
}

fn parse_triplets_into(builder: &mut StoreBuilder, text: &str) -> Result<()> {
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(Error::parse(
                lineno,
                format!(
                    "expected 3 or 4 TAB-separated fields, found {}",
                    fields.len()
                ),
            ));
        }
        let head: NodeId = fields[0].parse().map_err(|e| Error::parse(lineno, e))?;
        let tail: NodeId = fields[2].parse().map_err(|e| Error::parse(lineno, e))?;
        let split = match fields.get(3) {
            Some(s) => s.parse().map_err(|e| Error::parse(lineno, e))?,
            None => Split::Train,
        };
        let triplet = Triplet::new(head, fields[1], tail).map_err(|e| match e {
            Error::Validation(m) => Error::Validation(format!("line {lineno}: {m}")),
            other => other,
        })?;
        builder.add_triplet(triplet, split).map_err(|e| match e {
            Error::Validation(m) => Error::Validation(format!("line {lineno}: {m}")),
            other => other,
        })?;
    }
    Ok(())
}

/// Parses a POS file body (`node-id<TAB>pos-tag` per line).
pub fn parse_pos(text: &str) -> Result<Vec<(NodeId, Pos)>> {
    let mut seen: HashMap<NodeId, Pos> = HashMap::new();
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, tag) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(lineno, "expected node-id<TAB>pos-tag"))?;
        let node: NodeId = id.parse().map_err(|e| Error::parse(lineno, e))?;
        let pos: Pos = tag.parse().map_err(|e| Error::parse(lineno, e))?;
        if node.is_sememe() && pos != Pos::Unknown {
            return Err(Error::parse(
                lineno,
                format!("sememe {node} cannot carry POS {pos}"),
            ));
        }
        match seen.get(&node) {
            Some(&prev) if prev != pos => {
                return Err(Error::parse(
                    lineno,
                    format!("{node} tagged both {prev} and {pos}"),
                ))
            }
            Some(_) => {}
            None => {
                seen.insert(node.clone(), pos);
                out.push((node, pos));
            }
        }
    }
    Ok(out)
}
