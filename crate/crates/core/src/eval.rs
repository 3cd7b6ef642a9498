//! MAP / F1 evaluation, bucketed analyses and per-sememe difficulty.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fusion::PredictionResult;
use crate::graph::TripletStore;
use crate::ids::{NodeId, Pos, Split};
use crate::ranking::ScoredRanking;

/// Pairwise (cascade) summation; the result depends only on input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| pairwise_sum(values) / values.len() as f64)
}

/// Mean over gold sememes of precision at each gold sememe's rank.
pub fn average_precision(gold: &BTreeSet<NodeId>, ranking: &ScoredRanking) -> Result<f64> {
    if gold.is_empty() {
        return Err(Error::Contract(format!(
            "empty gold set for {}",
            ranking.target()
        )));
    }
    let mut ranks = gold
        .iter()
        .map(|s| {
            ranking.rank(s).ok_or_else(|| {
                Error::Contract(format!(
                    "gold sememe {s} missing from the ranking of {}",
                    ranking.target()
                ))
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    ranks.sort_unstable();
    let precisions: Vec<f64> = ranks
        .iter()
        .enumerate()
        .map(|(i, &r)| (i + 1) as f64 / r as f64)
        .collect();
    Ok(pairwise_sum(&precisions) / gold.len() as f64)
}

pub fn f1_score(gold: &BTreeSet<NodeId>, selected: &BTreeSet<NodeId>) -> f64 {
    let hits = gold.intersection(selected).count() as f64;
    if hits == 0.0 {
        return 0.0;
    }
    let p = hits / selected.len() as f64;
    let r = hits / gold.len() as f64;
    2.0 * p * r / (p + r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum F1Mode {
    /// Per-synset F1, then averaged.
    #[default]
    Macro,
    /// Precision and recall pooled over all synsets of a scope.
    Micro,
}

impl FromStr for F1Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "macro" => Ok(F1Mode::Macro),
            "micro" => Ok(F1Mode::Micro),
            other => Err(format!(
                "unknown F1 mode {other:?} (expected macro or micro)"
            )),
        }
    }
}

impl fmt::Display for F1Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            F1Mode::Macro => "macro",
            F1Mode::Micro => "micro",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvalOptions {
    pub f1_mode: F1Mode,
    /// Restrict evaluation to synsets with these POS tags.
    pub pos: Option<BTreeSet<Pos>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScopeMetrics {
    pub scope: String,
    /// Synsets contributing to this scope.
    pub n: usize,
    /// Of those, synsets with no prediction (scored AP = F1 = 0).
    pub uncovered: usize,
    /// Distinct sememes in the scope, for sememe-degree buckets.
    pub sememes: Option<usize>,
    pub map: Option<f64>,
    pub f1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsReport {
    pub rows: Vec<ScopeMetrics>,
}

impl MetricsReport {
    pub fn get(&self, scope: &str) -> Option<&ScopeMetrics> {
        self.rows.iter().find(|r| r.scope == scope)
    }

    /// One `key=value` record per scope.
    pub fn to_records(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "null".to_string(), |v| format!("{v:.16e}"));
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!(
                "scope={}\tn={}\tuncovered={}\tmap={}\tf1={}",
                r.scope,
                r.n,
                r.uncovered,
                opt(r.map),
                opt(r.f1)
            ));
            if let Some(s) = r.sememes {
                out.push_str(&format!("\tsememes={s}"));
            }
            out.push('\n');
        }
        out
    }

    /// Plot data: `bucket,n_synsets,n_sememes,map,f1`, empty cells for undefined values.
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(String::new, |v| format!("{v:.6}"));
        let mut out = String::from("bucket,n_synsets,n_sememes,map,f1\n");
        for r in &self.rows {
            out.push_str(&format!(
                "\"{}\",{},{},{},{}\n",
                r.scope,
                r.n,
                r.sememes.map_or_else(String::new, |s| s.to_string()),
                opt(r.map),
                opt(r.f1)
            ));
        }
        out
    }
}

/// Human-readable table: one row per model, MAP/F1 (×100) per POS tag and overall.
pub fn render_table(models: &[(String, MetricsReport)]) -> String {
    let scopes = ["noun", "verb", "adj", "adv", "all"];
    let width = models
        .iter()
        .map(|(m, _)| m.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!("{:<width$}", "Model");
    for s in ["noun", "verb", "adj", "adv", "avg."] {
        out.push_str(&format!(" | {s:^13}"));
    }
    out.push('\n');
    out.push_str(&format!("{:<width$}", ""));
    for _ in scopes {
        out.push_str(&format!(" | {:>6} {:>6}", "MAP", "F1"));
    }
    out.push('\n');
    out.push_str(&"-".repeat(width + scopes.len() * 16));
    out.push('\n');
    let cell =
        |x: Option<f64>| x.map_or_else(|| "---".to_string(), |v| format!("{:.1}", v * 100.0));
    for (model, report) in models {
        out.push_str(&format!("{model:<width$}"));
        for s in scopes {
            let row = report.get(s);
            out.push_str(&format!(
                " | {:>6} {:>6}",
                cell(row.and_then(|r| r.map)),
                cell(row.and_then(|r| r.f1))
            ));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
struct SynsetScore<'a> {
    synset: &'a NodeId,
    gold: &'a BTreeSet<NodeId>,
    pos: Pos,
    covered: bool,
    ap: f64,
    f1: f64,
    hits: usize,
    selected: usize,
}

fn score_synsets<'a>(
    results: &BTreeMap<NodeId, PredictionResult>,
    store: &TripletStore,
    gold: &'a crate::graph::AnnotationMap,
    options: &EvalOptions,
) -> Result<Vec<SynsetScore<'a>>> {
    let mut out = Vec::new();
    for (synset, gold_set) in gold.iter() {
        let pos = store.pos(synset).unwrap_or(Pos::Unknown);
        if let Some(keep) = &options.pos {
            if !keep.contains(&pos) {
                continue;
            }
        }
        let score = match results.get(synset) {
            Some(r) => SynsetScore {
                synset,
                gold: gold_set,
                pos,
                covered: true,
                ap: average_precision(gold_set, &r.ranking)?,
                f1: f1_score(gold_set, &r.selected),
                hits: gold_set.intersection(&r.selected).count(),
                selected: r.selected.len(),
            },
            None => SynsetScore {
                synset,
                gold: gold_set,
                pos,
                covered: false,
                ap: 0.0,
                f1: 0.0,
                hits: 0,
                selected: 0,
            },
        };
        out.push(score);
    }
    Ok(out)
}

fn aggregate(scope: String, scores: &[&SynsetScore], mode: F1Mode) -> ScopeMetrics {
    let aps: Vec<f64> = scores.iter().map(|s| s.ap).collect();
    let f1 = match mode {
        F1Mode::Macro => mean(&scores.iter().map(|s| s.f1).collect::<Vec<_>>()),
        F1Mode::Micro if scores.is_empty() => None,
        F1Mode::Micro => {
            let hits: usize = scores.iter().map(|s| s.hits).sum();
            let selected: usize = scores.iter().map(|s| s.selected).sum();
            let gold: usize = scores.iter().map(|s| s.gold.len()).sum();
            Some(if hits == 0 {
                0.0
            } else {
                let p = hits as f64 / selected as f64;
                let r = hits as f64 / gold as f64;
                2.0 * p * r / (p + r)
            })
        }
    };
    ScopeMetrics {
        scope,
        n: scores.len(),
        uncovered: scores.iter().filter(|s| !s.covered).count(),
        sememes: None,
        map: mean(&aps),
        f1,
    }
}

/// Macro-averaged MAP and F1 over every gold synset of `split`, overall and per POS tag.
/// Synsets without a prediction count as AP = F1 = 0.
pub fn evaluate(
    results: &BTreeMap<NodeId, PredictionResult>,
    store: &TripletStore,
    split: Split,
    options: &EvalOptions,
) -> Result<MetricsReport> {
    let gold = store.annotations(split);
    let scores = score_synsets(results, store, &gold, options)?;
    if scores.is_empty() {
        return Err(Error::Contract(format!(
            "no gold synsets in the {split} split"
        )));
    }
    let all: Vec<&SynsetScore> = scores.iter().collect();
    let mut rows = vec![aggregate("all".into(), &all, options.f1_mode)];
    for pos in Pos::ALL {
        let group: Vec<&SynsetScore> = scores.iter().filter(|s| s.pos == pos).collect();
        if !group.is_empty() {
            rows.push(aggregate(pos.as_str().into(), &group, options.f1_mode));
        }
    }
    Ok(MetricsReport { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BucketQuantity {
    SynsetDegree,
    SememeCount,
    SememeDegree,
}

impl BucketQuantity {
    pub fn as_str(self) -> &'static str {
        match self {
            BucketQuantity::SynsetDegree => "synset_degree",
            BucketQuantity::SememeCount => "sememe_count",
            BucketQuantity::SememeDegree => "sememe_degree",
        }
    }
}

/// Buckets `[0, c1), [c1, c2), …, [ck, ∞)` over a non-negative integer quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketSpec {
    pub quantity: BucketQuantity,
    pub cuts: Vec<usize>,
}

impl BucketSpec {
    pub fn new(quantity: BucketQuantity, cuts: Vec<usize>) -> Result<Self> {
        if cuts.first() == Some(&0) || cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "{} bucket cuts must be positive and strictly ascending, got {cuts:?}",
                quantity.as_str()
            )));
        }
        Ok(BucketSpec { quantity, cuts })
    }

    pub fn default_for(quantity: BucketQuantity) -> Self {
        let cuts = match quantity {
            BucketQuantity::SynsetDegree => vec![5, 10, 15, 20, 30],
            BucketQuantity::SememeCount => vec![2, 3, 4, 5, 7],
            BucketQuantity::SememeDegree => vec![10, 20, 50, 100, 200, 500],
        };
        BucketSpec { quantity, cuts }
    }

    pub fn bucket_count(&self) -> usize {
        self.cuts.len() + 1
    }

    pub fn bucket_of(&self, value: usize) -> usize {
        self.cuts.partition_point(|&c| c <= value)
    }

    pub fn label(&self, bucket: usize) -> String {
        let lo = if bucket == 0 {
            0
        } else {
            self.cuts[bucket - 1]
        };
        match self.cuts.get(bucket) {
            Some(hi) => format!("{}[{lo},{hi})", self.quantity.as_str()),
            None => format!("{}[{lo},inf)", self.quantity.as_str()),
        }
    }
}

/// Per-bucket MAP/F1. For sememe degree a synset joins the bucket of each of its gold
/// sememes (once per bucket). Empty buckets are reported with `n = 0` and no metrics.
pub fn bucket_analysis(
    results: &BTreeMap<NodeId, PredictionResult>,
    store: &TripletStore,
    split: Split,
    spec: &BucketSpec,
    options: &EvalOptions,
) -> Result<MetricsReport> {
    let gold = store.annotations(split);
    let scores = score_synsets(results, store, &gold, options)?;
    let mut members: Vec<Vec<&SynsetScore>> = vec![Vec::new(); spec.bucket_count()];
    let mut sememes: Vec<BTreeSet<&NodeId>> = vec![BTreeSet::new(); spec.bucket_count()];
    for s in &scores {
        match spec.quantity {
            BucketQuantity::SynsetDegree => {
                members[spec.bucket_of(store.degree(s.synset)?)].push(s)
            }
            BucketQuantity::SememeCount => members[spec.bucket_of(s.gold.len())].push(s),
            BucketQuantity::SememeDegree => {
                let mut buckets = BTreeSet::new();
                for sememe in s.gold {
                    let b = spec.bucket_of(store.degree(sememe)?);
                    sememes[b].insert(sememe);
                    buckets.insert(b);
                }
                for b in buckets {
                    members[b].push(s);
                }
            }
        }
    }
    let rows = members
        .iter()
        .enumerate()
        .map(|(b, m)| {
            let mut row = aggregate(spec.label(b), m, options.f1_mode);
            if spec.quantity == BucketQuantity::SememeDegree {
                row.sememes = Some(sememes[b].len());
            }
            row
        })
        .collect();
    Ok(MetricsReport { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SememeScore {
    pub sememe: NodeId,
    pub map: f64,
    pub f1: f64,
    /// Evaluated synsets annotated with this sememe.
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Difficulty {
    /// Highest MAP first.
    pub easiest: Vec<SememeScore>,
    /// Lowest MAP first.
    pub hardest: Vec<SememeScore>,
}

impl Difficulty {
    pub fn to_text(&self) -> String {
        let mut out = String::from("rank\teasiest\tMAP/F1\thardest\tMAP/F1\n");
        for i in 0..self.easiest.len().max(self.hardest.len()) {
            let cell = |v: Option<&SememeScore>| match v {
                Some(s) => format!(
                    "{}\t{:.1}/{:.1}",
                    s.sememe.name(),
                    s.map * 100.0,
                    s.f1 * 100.0
                ),
                None => "\t".to_string(),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                i + 1,
                cell(self.easiest.get(i)),
                cell(self.hardest.get(i))
            ));
        }
        out
    }
}

/// Per-sememe average AP/F1 over the evaluated synsets annotated with it.
pub fn sememe_difficulty(
    results: &BTreeMap<NodeId, PredictionResult>,
    store: &TripletStore,
    split: Split,
    top_k: usize,
    options: &EvalOptions,
) -> Result<Difficulty> {
    let gold = store.annotations(split);
    let scores = score_synsets(results, store, &gold, options)?;
    let mut by_sememe: BTreeMap<&NodeId, Vec<&SynsetScore>> = BTreeMap::new();
    for s in &scores {
        for sememe in s.gold {
            by_sememe.entry(sememe).or_default().push(s);
        }
    }
    let mut table: Vec<SememeScore> = by_sememe
        .into_iter()
        .map(|(sememe, members)| {
            let aps: Vec<f64> = members.iter().map(|m| m.ap).collect();
            let f1s: Vec<f64> = members.iter().map(|m| m.f1).collect();
            SememeScore {
                sememe: sememe.clone(),
                map: mean(&aps).unwrap_or(0.0),
                f1: mean(&f1s).unwrap_or(0.0),
                n: members.len(),
            }
        })
        .collect();
    if top_k > table.len() {
        log::warn!(
            "requested top {top_k} sememes but only {} occur in gold sets",
            table.len()
        );
    }
    table.sort_by(|a, b| {
        b.map
            .total_cmp(&a.map)
            .then(b.f1.total_cmp(&a.f1))
            .then_with(|| a.sememe.cmp(&b.sememe))
    });
    let k = top_k.min(table.len());
    let easiest = table[..k].to_vec();
    let mut hardest = table[table.len() - k..].to_vec();
    hardest.reverse();
    Ok(Difficulty { easiest, hardest })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{threshold_select, Provenance};

    fn sem(n: &str) -> NodeId {
        NodeId::sememe(n).unwrap()
    }

    fn syn(n: &str) -> NodeId {
        NodeId::synset(n).unwrap()
    }

    fn ranking_of(target: &str, order: &[&str]) -> ScoredRanking {
        let n = order.len();
        ScoredRanking::from_scores(
            syn(target),
            order
                .iter()
                .enumerate()
                .map(|(i, s)| (sem(s), (n - i) as f64))
                .collect(),
        )
        .unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<NodeId> {
        items.iter().map(|s| sem(s)).collect()
    }

    #[test]
    fn ap_hand_values() {
        let r = ranking_of("b", &["s1", "s2", "s3", "s4", "s5"]);
        assert_eq!(average_precision(&set(&["s1"]), &r).unwrap(), 1.0);
        let ap = average_precision(&set(&["s1", "s3"]), &r).unwrap();
        assert!((ap - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        assert_eq!(
            average_precision(
                &set(&["s1", "s2", "s3", "s4", "s5"]),
                &ranking_of("b", &["s5", "s2", "s4", "s1", "s3"])
            )
            .unwrap(),
            1.0
        );
        assert!(average_precision(&BTreeSet::new(), &r).is_err());
        assert!(average_precision(&set(&["zz"]), &r).is_err());
    }

    #[test]
    fn f1_hand_values() {
        assert_eq!(f1_score(&set(&["a", "b"]), &set(&["a", "b"])), 1.0);
        assert_eq!(f1_score(&set(&["b", "c"]), &set(&["a", "b"])), 0.5);
        assert_eq!(f1_score(&set(&["a"]), &BTreeSet::new()), 0.0);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let v: Vec<f64> = (0..100).map(|i| i as f64 * 0.5).collect();
        assert_eq!(pairwise_sum(&v), v.iter().sum::<f64>());
    }

    fn fixture() -> (TripletStore, BTreeMap<NodeId, PredictionResult>) {
        let store = TripletStore::parse_with_pos(
            "syn:n1\thave_sememe\tsem:a\ttest\n\
             syn:n1\thave_sememe\tsem:b\ttest\n\
             syn:v1\thave_sememe\tsem:c\ttest\n\
             syn:t1\thave_sememe\tsem:a\n\
             syn:t1\tsimilar\tsyn:n1\n\
             syn:t1\tsimilar\tsyn:v1\n\
             syn:n1\tsimilar\tsyn:v1\n",
            Some("syn:n1\tnoun\nsyn:v1\tverb\nsyn:t1\tnoun\n"),
        )
        .unwrap();
        let mut results = BTreeMap::new();
        // n1: gold {a, b} at ranks 1 and 3 -> AP 5/6, selected {a, c} -> F1 0.5
        let r = ranking_of("n1", &["a", "c", "b"]);
        let mut p = threshold_select(r, 1.5, Provenance::Fused);
        assert_eq!(p.selected, set(&["a", "c"]));
        p.provenance = Provenance::Fused;
        results.insert(syn("n1"), p);
        // v1: gold {c} at rank 2 -> AP 0.5, selected {b} -> F1 0
        let r = ranking_of("v1", &["b", "c", "a"]);
        results.insert(syn("v1"), threshold_select(r, 2.5, Provenance::Rr));
        (store, results)
    }

    #[test]
    fn evaluate_fixture() {
        let (store, results) = fixture();
        let report = evaluate(&results, &store, Split::Test, &EvalOptions::default()).unwrap();
        let all = report.get("all").unwrap();
        assert_eq!(all.n, 2);
        assert!((all.map.unwrap() - (5.0 / 6.0 + 0.5) / 2.0).abs() < 1e-15);
        assert!((all.f1.unwrap() - 0.25).abs() < 1e-15);
        assert!((report.get("noun").unwrap().map.unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(report.get("verb").unwrap().f1, Some(0.0));
        assert!(report.get("adj").is_none());

        let micro = EvalOptions {
            f1_mode: F1Mode::Micro,
            ..Default::default()
        };
        let report = evaluate(&results, &store, Split::Test, &micro).unwrap();
        // hits 1, selected 3, gold 3 -> P = R = 1/3
        assert!((report.get("all").unwrap().f1.unwrap() - 1.0 / 3.0).abs() < 1e-15);

        assert!(evaluate(&results, &store, Split::Valid, &EvalOptions::default()).is_err());
    }

    #[test]
    fn missing_predictions_count_as_zero() {
        let (store, mut results) = fixture();
        results.remove(&syn("v1"));
        let report = evaluate(&results, &store, Split::Test, &EvalOptions::default()).unwrap();
        let all = report.get("all").unwrap();
        assert_eq!((all.n, all.uncovered), (2, 1));
        assert!((all.map.unwrap() - 5.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn buckets_fixture() {
        let (store, results) = fixture();
        // degrees: n1 = 4, v1 = 3
        let spec = BucketSpec::new(BucketQuantity::SynsetDegree, vec![4]).unwrap();
        let report = bucket_analysis(
            &results,
            &store,
            Split::Test,
            &spec,
            &EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(report.rows[0].scope, "synset_degree[0,4)");
        assert_eq!(report.rows[0].map, Some(0.5));
        assert!((report.rows[1].map.unwrap() - 5.0 / 6.0).abs() < 1e-15);

        let single = BucketSpec::new(BucketQuantity::SememeCount, vec![]).unwrap();
        let one = bucket_analysis(
            &results,
            &store,
            Split::Test,
            &single,
            &EvalOptions::default(),
        )
        .unwrap();
        let overall = evaluate(&results, &store, Split::Test, &EvalOptions::default()).unwrap();
        assert_eq!(one.rows[0].map, overall.get("all").unwrap().map);
        assert_eq!(one.rows[0].f1, overall.get("all").unwrap().f1);

        let empty = BucketSpec::new(BucketQuantity::SememeCount, vec![5]).unwrap();
        let r = bucket_analysis(
            &results,
            &store,
            Split::Test,
            &empty,
            &EvalOptions::default(),
        )
        .unwrap();
        assert_eq!((r.rows[1].n, r.rows[1].map, r.rows[1].f1), (0, None, None));

        // sememe degrees: a = 2, b = 1, c = 1
        let sd = BucketSpec::new(BucketQuantity::SememeDegree, vec![2]).unwrap();
        let r =
            bucket_analysis(&results, &store, Split::Test, &sd, &EvalOptions::default()).unwrap();
        assert_eq!((r.rows[0].n, r.rows[0].sememes), (2, Some(2)));
        assert_eq!((r.rows[1].n, r.rows[1].sememes), (1, Some(1)));
        assert!(r.to_csv().starts_with("bucket,"));
    }

    #[test]
    fn bucket_spec_validation() {
        assert!(BucketSpec::new(BucketQuantity::SememeCount, vec![3, 3]).is_err());
        assert!(BucketSpec::new(BucketQuantity::SememeCount, vec![0, 3]).is_err());
        let s = BucketSpec::default_for(BucketQuantity::SememeDegree);
        assert_eq!(s.bucket_count(), 7);
        assert_eq!(s.bucket_of(0), 0);
        assert_eq!(s.bucket_of(10), 1);
        assert_eq!(s.bucket_of(10_000), 6);
    }

    #[test]
    fn difficulty_fixture() {
        let (store, results) = fixture();
        let d =
            sememe_difficulty(&results, &store, Split::Test, 10, &EvalOptions::default()).unwrap();
        // a, b only in n1 (AP 5/6, F1 0.5); c only in v1 (AP 0.5, F1 0)
        assert_eq!(d.easiest.len(), 3);
        assert_eq!(d.easiest[0].sememe, sem("a"));
        assert!((d.easiest[0].map - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(d.hardest[0].sememe, sem("c"));
        assert_eq!((d.hardest[0].map, d.hardest[0].f1), (0.5, 0.0));
        assert!(d.to_text().lines().count() == 4);
    }

    #[test]
    fn table_layout() {
        let (store, results) = fixture();
        let report = evaluate(&results, &store, Split::Test, &EvalOptions::default()).unwrap();
        let table = render_table(&[("Ensemble".into(), report)]);
        let row = table.lines().nth(3).unwrap();
        assert!(row.starts_with("Ensemble"));
        assert!(row.contains("---"));
        assert!(row.contains("66.7"));
    }
}
