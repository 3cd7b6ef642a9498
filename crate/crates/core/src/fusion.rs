//! Reciprocal-rank fusion of the two rankers and threshold selection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ids::NodeId;
use crate::ranking::ScoredRanking;
use crate::snapshot::format_f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionConfig {
    /// Weight of the semantic recommender's reciprocal rank.
    pub lambda_c: f64,
    /// Weight of the relational model's reciprocal rank.
    pub lambda_r: f64,
    /// Sememes scoring strictly above this are selected.
    pub threshold: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig {
            lambda_c: 0.45,
            lambda_r: 0.55,
            threshold: 0.32,
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(self.lambda_c) || !ok(self.lambda_r) || self.lambda_c + self.lambda_r <= 0.0 {
            return Err(Error::Config(format!(
                "fusion weights must be non-negative with a positive sum, got {} and {}",
                self.lambda_c, self.lambda_r
            )));
        }
        if !self.threshold.is_finite() {
            return Err(Error::Config("threshold must be finite".into()));
        }
        Ok(())
    }
}

/// How single-model rankings are scored before thresholding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreMode {
    /// `1 / rank`, the same scale as a fused score with unit weight.
    #[default]
    Reciprocal,
    /// The model's own association scores.
    Raw,
}

impl ScoreMode {
    pub fn apply(self, ranking: &ScoredRanking) -> ScoredRanking {
        match self {
            ScoreMode::Reciprocal => ranking.reciprocal(1.0),
            ScoreMode::Raw => ranking.clone(),
        }
    }
}

impl FromStr for ScoreMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rank" | "reciprocal" => Ok(ScoreMode::Reciprocal),
            "raw" => Ok(ScoreMode::Raw),
            other => Err(format!(
                "unknown score mode {other:?} (expected rank or raw)"
            )),
        }
    }
}

impl fmt::Display for ScoreMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreMode::Reciprocal => "rank",
            ScoreMode::Raw => "raw",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Sr,
    Rr,
    Fused,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Sr => "SR",
            Provenance::Rr => "RR",
            Provenance::Fused => "Fused",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "SR" => Ok(Provenance::Sr),
            "RR" => Ok(Provenance::Rr),
            "Fused" => Ok(Provenance::Fused),
            other => Err(format!("unknown provenance {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionResult {
    pub target: NodeId,
    pub ranking: ScoredRanking,
    pub selected: BTreeSet<NodeId>,
    pub provenance: Provenance,
}

/// `λc / rank_sr + λr / rank_rr`. Without an SR ranking the result is `λr / rank_rr`,
/// i.e. the RR order. Ties are broken by RR rank.
pub fn fuse(
    sr: Option<&ScoredRanking>,
    rr: &ScoredRanking,
    config: &FusionConfig,
) -> Result<ScoredRanking> {
    config.validate()?;
    if let Some(sr) = sr {
        if sr.target() != rr.target() {
            return Err(Error::Contract(format!(
                "fusing rankings for different targets {} and {}",
                sr.target(),
                rr.target()
            )));
        }
        if sr.len() != rr.len() || rr.order().any(|s| sr.rank(s).is_none()) {
            return Err(Error::Contract(format!(
                "SR and RR rank different candidate sets for {}",
                rr.target()
            )));
        }
    }
    let mut fused: Vec<(NodeId, f64, usize)> = rr
        .order()
        .enumerate()
        .map(|(i, s)| {
            let rank_r = i + 1;
            let mut score = config.lambda_r / rank_r as f64;
            if let Some(sr) = sr {
                let rank_c = sr.rank(s).expect("candidate sets checked above");
                score += config.lambda_c / rank_c as f64;
            }
            (s.clone(), score, rank_r)
        })
        .collect();
    fused.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.2.cmp(&b.2)));
    ScoredRanking::from_ordered(
        rr.target().clone(),
        fused.into_iter().map(|(s, v, _)| (s, v)).collect(),
    )
}

/// Selects every sememe whose score is strictly greater than `threshold`.
pub fn threshold_select(
    ranking: ScoredRanking,
    threshold: f64,
    provenance: Provenance,
) -> PredictionResult {
    let selected = ranking
        .entries()
        .iter()
        .filter(|(_, v)| *v > threshold)
        .map(|(s, _)| s.clone())
        .collect();
    PredictionResult {
        target: ranking.target().clone(),
        ranking,
        selected,
        provenance,
    }
}

/// One line per target: `synset<TAB>s1:score1,s2:score2,…<TAB>selected-list<TAB>provenance`.
pub fn write_predictions(results: &BTreeMap<NodeId, PredictionResult>) -> String {
    let mut out = String::new();
    for r in results.values() {
        out.push_str(&r.target.to_string());
        out.push('\t');
        let ranking: Vec<String> = r
            .ranking
            .entries()
            .iter()
            .map(|(s, v)| format!("{s}:{}", format_f64(*v)))
            .collect();
        out.push_str(&ranking.join(","));
        out.push('\t');
        let selected: Vec<String> = r
            .ranking
            .order()
            .filter(|s| r.selected.contains(*s))
            .map(|s| s.to_string())
            .collect();
        out.push_str(&selected.join(","));
        out.push('\t');
        out.push_str(&r.provenance.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_predictions(text: &str) -> Result<BTreeMap<NodeId, PredictionResult>> {
    let mut out = BTreeMap::new();
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
        let target: NodeId = fields[0].parse().map_err(|e| Error::parse(lineno, e))?;
        let entries = split_list(fields[1])
            .map(|item| {
                let (id, score) = item
                    .rsplit_once(':')
                    .ok_or_else(|| Error::parse(lineno, format!("bad entry {item:?}")))?;
                let id: NodeId = id.parse().map_err(|e| Error::parse(lineno, e))?;
                let score: f64 = score
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad score {score:?}")))?;
                if score.is_nan() {
                    return Err(Error::parse(lineno, "NaN score"));
                }
                Ok((id, score))
            })
            .collect::<Result<Vec<_>>>()?;
        let ranking = ScoredRanking::from_ordered(target.clone(), entries)
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
        let selected = split_list(fields[2])
            .map(|id| {
                let id: NodeId = id.parse().map_err(|e| Error::parse(lineno, e))?;
                if ranking.rank(&id).is_none() {
                    return Err(Error::parse(lineno, format!("selected {id} is not ranked")));
                }
                Ok(id)
            })
            .collect::<Result<BTreeSet<_>>>()?;
        let provenance = match fields.get(3) {
            Some(p) => p.parse().map_err(|e| Error::parse(lineno, e))?,
            None => Provenance::Fused,
        };
        let result = PredictionResult {
            target: target.clone(),
            ranking,
            selected,
            provenance,
        };
        if out.insert(target.clone(), result).is_some() {
            return Err(Error::parse(lineno, format!("duplicate target {target}")));
        }
    }
    Ok(out)
}

fn split_list(field: &str) -> impl Iterator<Item = &str> {
    field.split(',').filter(|s| !s.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sem(n: &str) -> NodeId {
        NodeId::sememe(n).unwrap()
    }

    fn ranking(order: &[&str]) -> ScoredRanking {
        let n = order.len();
        ScoredRanking::from_scores(
            NodeId::synset("b").unwrap(),
            order
                .iter()
                .enumerate()
                .map(|(i, s)| (sem(s), (n - i) as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn fused_hand_value() {
        let sr = ranking(&["a", "b", "c"]);
        let rr = ranking(&["b", "a", "c"]);
        let fused = fuse(Some(&sr), &rr, &FusionConfig::default()).unwrap();
        assert!((fused.score(&sem("a")).unwrap() - 0.725).abs() < 1e-15);
    }

    #[test]
    fn degenerate_weights_follow_one_model() {
        let sr = ranking(&["c", "a", "d", "b"]);
        let rr = ranking(&["b", "d", "a", "c"]);
        let only_rr = FusionConfig {
            lambda_c: 0.0,
            ..Default::default()
        };
        assert!(fuse(Some(&sr), &rr, &only_rr)
            .unwrap()
            .order()
            .eq(rr.order()));
        let only_sr = FusionConfig {
            lambda_r: 0.0,
            ..Default::default()
        };
        assert!(fuse(Some(&sr), &rr, &only_sr)
            .unwrap()
            .order()
            .eq(sr.order()));
        let absent = fuse(None, &rr, &FusionConfig::default()).unwrap();
        assert!(absent.order().eq(rr.order()));
        assert!((absent.score(&sem("d")).unwrap() - 0.55 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn mismatched_candidates_rejected() {
        let sr = ranking(&["a", "b"]);
        let rr = ranking(&["a", "c"]);
        assert!(matches!(
            fuse(Some(&sr), &rr, &FusionConfig::default()).unwrap_err(),
            Error::Contract(_)
        ));
        let bad = FusionConfig {
            lambda_c: 0.0,
            lambda_r: 0.0,
            threshold: 0.3,
        };
        assert!(fuse(None, &rr, &bad).is_err());
    }

    #[test]
    fn threshold_is_strict() {
        let r = ScoredRanking::from_scores(
            NodeId::synset("b").unwrap(),
            vec![
                (sem("s1"), 0.725),
                (sem("s2"), 0.45 / 2.0 + 0.55 / 10.0),
                (sem("s3"), 0.32),
            ],
        )
        .unwrap();
        let p = threshold_select(r, 0.32, Provenance::Fused);
        assert_eq!(p.selected, BTreeSet::from([sem("s1")]));
        assert_eq!(p.ranking.len(), 3);

        let empty = ScoredRanking::from_scores(NodeId::synset("b").unwrap(), vec![]).unwrap();
        assert!(threshold_select(empty, 0.32, Provenance::Rr)
            .selected
            .is_empty());
    }

    #[test]
    fn dump_round_trip() {
        let mut results = BTreeMap::new();
        for (target, order, prov) in [
            ("x", ["a", "b", "c"], Provenance::Fused),
            ("y", ["c", "a", "b"], Provenance::Rr),
        ] {
            let fused = fuse(None, &ranking(&order), &FusionConfig::default()).unwrap();
            let fused = ScoredRanking::from_ordered(
                NodeId::synset(target).unwrap(),
                fused.entries().to_vec(),
            )
            .unwrap();
            let p = threshold_select(fused, 0.32, prov);
            results.insert(p.target.clone(), p);
        }
        let text = write_predictions(&results);
        let back = parse_predictions(&text).unwrap();
        assert_eq!(back, results);
        assert_eq!(write_predictions(&back), text);
    }

    #[test]
    fn dump_parse_errors() {
        assert!(parse_predictions("syn:b\tsem:a:1.0\n").is_err());
        assert!(parse_predictions("syn:b\tsem:a:1.0\tsem:z\n").is_err());
        assert!(parse_predictions("syn:b\tsem:a:0.1,sem:b:0.9\t\n").is_err());
        assert!(parse_predictions("syn:b\tsem:a:x\t\n").is_err());
        assert!(parse_predictions("syn:b\t\t\nsyn:b\t\t\n").is_err());
    }
}
