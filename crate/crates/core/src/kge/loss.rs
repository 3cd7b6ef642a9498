use std::collections::HashMap;

use super::EmbeddingTable;
use crate::error::{Error, Result};
use crate::graph::{AnnotationMap, Triplet};
use crate::ids::RelationId;

/// `‖h + r − t‖²`
pub(crate) fn distance(h: &[f64], r: &[f64], t: &[f64]) -> f64 {
    h.iter()
        .zip(r)
        .zip(t)
        .map(|((h, r), t)| {
            let d = h + r - t;
            d * d
        })
        .sum()
}

/// Index form of a triplet against an [`EmbeddingTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Slot {
    pub head: usize,
    pub relation: usize,
    pub tail: usize,
}

impl Slot {
    pub fn resolve(table: &EmbeddingTable, t: &Triplet) -> Result<Slot> {
        Ok(Slot {
            head: table.node_lookup(&t.head)?,
            relation: table.relation_lookup(&t.relation)?,
            tail: table.node_lookup(&t.tail)?,
        })
    }

    fn distance(&self, table: &EmbeddingTable) -> f64 {
        distance(
            table.node_row(self.head),
            table.relation_row(self.relation),
            table.node_row(self.tail),
        )
    }

    fn residual(&self, table: &EmbeddingTable, out: &mut [f64]) {
        let (h, r, t) = (
            table.node_row(self.head),
            table.relation_row(self.relation),
            table.node_row(self.tail),
        );
        for (k, o) in out.iter_mut().enumerate() {
            *o = h[k] + r[k] - t[k];
        }
    }
}

/// Sparse gradient keyed by table row.
#[derive(Debug, Clone, Default)]
pub struct Gradient {
    dim: usize,
    nodes: HashMap<usize, Vec<f64>>,
    relations: HashMap<usize, Vec<f64>>,
}

impl Gradient {
    pub fn new(dim: usize) -> Self {
        Gradient {
            dim,
            ..Default::default()
        }
    }

    pub fn node(&self, row: usize) -> Option<&[f64]> {
        self.nodes.get(&row).map(Vec::as_slice)
    }

    pub fn relation(&self, row: usize) -> Option<&[f64]> {
        self.relations.get(&row).map(Vec::as_slice)
    }

    pub(crate) fn add_node(&mut self, row: usize, scale: f64, v: &[f64]) {
        let dim = self.dim;
        let g = self.nodes.entry(row).or_insert_with(|| vec![0.0; dim]);
        g.iter_mut().zip(v).for_each(|(g, v)| *g += scale * v);
    }

    pub(crate) fn add_relation(&mut self, row: usize, scale: f64, v: &[f64]) {
        let dim = self.dim;
        let g = self.relations.entry(row).or_insert_with(|| vec![0.0; dim]);
        g.iter_mut().zip(v).for_each(|(g, v)| *g += scale * v);
    }

    pub(crate) fn merge(&mut self, other: &Gradient) {
        for (&row, v) in &other.nodes {
            self.add_node(row, 1.0, v);
        }
        for (&row, v) in &other.relations {
            self.add_relation(row, 1.0, v);
        }
    }

    /// `table -= lr · self`. Returns the touched node rows.
    pub(crate) fn apply(&self, table: &mut EmbeddingTable, lr: f64) -> Vec<usize> {
        for (&row, g) in &self.relations {
            table
                .relation_row_mut(row)
                .iter_mut()
                .zip(g)
                .for_each(|(x, g)| *x -= lr * g);
        }
        let mut touched = Vec::with_capacity(self.nodes.len());
        for (&row, g) in &self.nodes {
            table
                .node_row_mut(row)
                .iter_mut()
                .zip(g)
                .for_each(|(x, g)| *x -= lr * g);
            touched.push(row);
        }
        touched.sort_unstable();
        touched
    }
}

/// Adds `weight · [τ + d(pos) − d(neg)]₊` and its gradient. Returns the unweighted hinge.
pub(crate) fn accumulate_pair(
    table: &EmbeddingTable,
    pos: Slot,
    neg: Slot,
    margin: f64,
    weight: f64,
    grad: &mut Gradient,
    scratch: &mut [f64],
) -> f64 {
    let hinge = margin + pos.distance(table) - neg.distance(table);
    if hinge <= 0.0 {
        return 0.0;
    }
    if weight != 0.0 {
        pos.residual(table, scratch);
        grad.add_node(pos.head, 2.0 * weight, scratch);
        grad.add_relation(pos.relation, 2.0 * weight, scratch);
        grad.add_node(pos.tail, -2.0 * weight, scratch);
        neg.residual(table, scratch);
        grad.add_node(neg.head, -2.0 * weight, scratch);
        grad.add_relation(neg.relation, -2.0 * weight, scratch);
        grad.add_node(neg.tail, 2.0 * weight, scratch);
    }
    hinge
}

/// Adds `weight · ‖b + r_s − Σ s‖²` and its gradient. Returns the unweighted term.
pub(crate) fn accumulate_equivalence(
    table: &EmbeddingTable,
    synset: usize,
    sememes: &[usize],
    equivalence: usize,
    weight: f64,
    grad: &mut Gradient,
    scratch: &mut [f64],
) -> f64 {
    let b = table.node_row(synset);
    let rs = table.relation_row(equivalence);
    for (k, e) in scratch.iter_mut().enumerate() {
        *e = b[k] + rs[k];
    }
    for &s in sememes {
        scratch
            .iter_mut()
            .zip(table.node_row(s))
            .for_each(|(e, s)| *e -= s);
    }
    let value: f64 = scratch.iter().map(|e| e * e).sum();
    if weight != 0.0 {
        grad.add_node(synset, 2.0 * weight, scratch);
        grad.add_relation(equivalence, 2.0 * weight, scratch);
        for &s in sememes {
            grad.add_node(s, -2.0 * weight, scratch);
        }
    }
    value
}

/// `d(h + r, t) = ‖h + r − t‖²`
pub fn score_triplet(table: &EmbeddingTable, t: &Triplet) -> Result<f64> {
    Ok(Slot::resolve(table, t)?.distance(table))
}

fn aligned(positives: &[Triplet], negatives: &[Triplet]) -> Result<()> {
    if positives.len() != negatives.len() {
        return Err(Error::Contract(format!(
            "{} positives but {} negatives",
            positives.len(),
            negatives.len()
        )));
    }
    Ok(())
}

/// `Σ [τ + d(h + r, t) − d(h' + r, t')]₊` over aligned positive/negative pairs.
pub fn margin_loss(
    table: &EmbeddingTable,
    positives: &[Triplet],
    negatives: &[Triplet],
    margin: f64,
) -> Result<f64> {
    aligned(positives, negatives)?;
    positives
        .iter()
        .zip(negatives)
        .map(|(p, n)| {
            let hinge = margin + score_triplet(table, p)? - score_triplet(table, n)?;
            Ok(hinge.max(0.0))
        })
        .sum()
}

pub fn margin_loss_gradient(
    table: &EmbeddingTable,
    positives: &[Triplet],
    negatives: &[Triplet],
    margin: f64,
) -> Result<(f64, Gradient)> {
    aligned(positives, negatives)?;
    let mut grad = Gradient::new(table.dim());
    let mut scratch = vec![0.0; table.dim()];
    let mut loss = 0.0;
    for (p, n) in positives.iter().zip(negatives) {
        let (p, n) = (Slot::resolve(table, p)?, Slot::resolve(table, n)?);
        loss += accumulate_pair(table, p, n, margin, 1.0, &mut grad, &mut scratch);
    }
    Ok((loss, grad))
}

/// Synset row with the rows of its sememes.
type AnnotatedRows = Vec<(usize, Vec<usize>)>;

fn resolve_annotations(
    table: &EmbeddingTable,
    annotations: &AnnotationMap,
) -> Result<(usize, AnnotatedRows)> {
    let rs = table.relation_lookup(&RelationId::semantic_equivalence())?;
    let rows = annotations
        .iter()
        .map(|(b, sememes)| {
            let s = sememes
                .iter()
                .map(|s| table.node_lookup(s))
                .collect::<Result<Vec<_>>>()?;
            Ok((table.node_lookup(b)?, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rs, rows))
}

/// `Σ_b ‖b + r_s − Σ_{s ∈ S_b} s‖²` over the annotated synsets.
pub fn equivalence_loss(table: &EmbeddingTable, annotations: &AnnotationMap) -> Result<f64> {
    equivalence_loss_gradient(table, annotations).map(|(l, _)| l)
}

pub fn equivalence_loss_gradient(
    table: &EmbeddingTable,
    annotations: &AnnotationMap,
) -> Result<(f64, Gradient)> {
    let mut grad = Gradient::new(table.dim());
    if annotations.is_empty() {
        return Ok((0.0, grad));
    }
    let (rs, rows) = resolve_annotations(table, annotations)?;
    let mut scratch = vec![0.0; table.dim()];
    let loss = rows
        .iter()
        .map(|(b, s)| accumulate_equivalence(table, *b, s, rs, 1.0, &mut grad, &mut scratch))
        .sum();
    Ok((loss, grad))
}
