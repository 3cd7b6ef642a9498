//! Sememe prediction for multilingual dictionary synsets.
//!
//! A [`TripletStore`] holds synsets, sememes and typed relations. Two models rank
//! candidate sememes for an unannotated synset: a translational embedding model
//! ([`kge::train`], [`kge::predict_sememes_rr`]) and a neighbour-based semantic
//! recommender ([`SemanticRecommender`]). [`fuse`] combines them by reciprocal rank
//! and [`eval`] scores the result with MAP and F1.

pub mod error;
pub mod eval;
pub mod fusion;
pub mod graph;
pub mod ids;
pub mod kge;
pub mod ranking;
pub mod recommend;
pub mod rng;
pub mod snapshot;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{evaluate, EvalOptions, F1Mode, MetricsReport};
pub use fusion::{fuse, threshold_select, FusionConfig, PredictionResult, Provenance, ScoreMode};
pub use graph::{AnnotationMap, Triplet, TripletStore};
pub use ids::{NodeId, NodeKind, Pos, RelationId, RelationKind, Split};
pub use kge::{EmbeddingTable, TrainConfig};
pub use ranking::ScoredRanking;
pub use recommend::{SemanticRecommender, SemanticVectorStore, SrConfig};
pub use synth::{generate, SynthConfig, SynthDataset};
