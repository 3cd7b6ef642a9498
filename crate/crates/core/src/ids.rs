//! Node, relation, POS and split identifiers shared by every file format.
//!
//! Nodes are serialized with a kind prefix (`syn:` or `sem:`) so a bare line
//! of a triplet file is enough to know which side of the graph a node lives on.
//! Relations carry their kind explicitly; in triplet files the kind is implied
//! by the endpoints, in embedding snapshots it is written as `rel:<tag>:<name>`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Name of the artificial relation linking a synset to each of its sememes.
pub const HAVE_SEMEME: &str = "have_sememe";

/// Name of the learned synset-to-sememe-sum relation. Never appears in triplet files.
pub const SEMANTIC_EQUIVALENCE: &str = "semantic_equivalence";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Synset,
    Sememe,
}

impl NodeKind {
    pub fn prefix(self) -> &'static str {
        match self {
            NodeKind::Synset => "syn:",
            NodeKind::Sememe => "sem:",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    kind: NodeKind,
    name: String,
}

fn check_name(name: &str) -> std::result::Result<(), String> {
    if name.is_empty() {
        return Err("empty name".into());
    }
    if let Some(c) = name.chars().find(|c| c.is_control() || *c == ',') {
        return Err(format!("name {name:?} contains forbidden character {c:?}"));
    }
    Ok(())
}

impl NodeId {
    pub fn new(kind: NodeKind, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        check_name(&name).map_err(Error::Validation)?;
        Ok(NodeId { kind, name })
    }

    pub fn synset(name: impl Into<String>) -> Result<Self> {
        Self::new(NodeKind::Synset, name)
    }

    pub fn sememe(name: impl Into<String>) -> Result<Self> {
        Self::new(NodeKind::Sememe, name)
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    /// Name without the kind prefix.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_synset(&self) -> bool {
        self.kind == NodeKind::Synset
    }

    pub fn is_sememe(&self) -> bool {
        self.kind == NodeKind::Sememe
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.name)
    }
}

impl FromStr for NodeId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (kind, rest) = if let Some(rest) = s.strip_prefix("syn:") {
            (NodeKind::Synset, rest)
        } else if let Some(rest) = s.strip_prefix("sem:") {
            (NodeKind::Sememe, rest)
        } else {
            return Err(format!("node id {s:?} lacks a syn: or sem: prefix"));
        };
        check_name(rest)?;
        Ok(NodeId {
            kind,
            name: rest.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    SynsetSynset,
    SememeSememe,
    HaveSememe,
    SemanticEquivalence,
}

impl RelationKind {
    fn tag(self) -> &'static str {
        match self {
            RelationKind::SynsetSynset => "syn",
            RelationKind::SememeSememe => "sem",
            RelationKind::HaveSememe => "have",
            RelationKind::SemanticEquivalence => "equiv",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "syn" => RelationKind::SynsetSynset,
            "sem" => RelationKind::SememeSememe,
            "have" => RelationKind::HaveSememe,
            "equiv" => RelationKind::SemanticEquivalence,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationId {
    kind: RelationKind,
    name: String,
}

impl RelationId {
    pub fn new(kind: RelationKind, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        check_name(&name).map_err(Error::Validation)?;
        match kind {
            RelationKind::HaveSememe if name != HAVE_SEMEME => Err(Error::Validation(format!(
                "synset-sememe relation must be named {HAVE_SEMEME}, got {name:?}"
            ))),
            RelationKind::SemanticEquivalence if name != SEMANTIC_EQUIVALENCE => {
                Err(Error::Validation(format!(
                    "equivalence relation must be named {SEMANTIC_EQUIVALENCE}"
                )))
            }
            RelationKind::SynsetSynset | RelationKind::SememeSememe
                if name == HAVE_SEMEME || name == SEMANTIC_EQUIVALENCE =>
            {
                Err(Error::Validation(format!(
                    "relation name {name:?} is reserved"
                )))
            }
            _ => Ok(RelationId { kind, name }),
        }
    }

    pub fn have_sememe() -> Self {
        RelationId {
            kind: RelationKind::HaveSememe,
            name: HAVE_SEMEME.to_string(),
        }
    }

    pub fn semantic_equivalence() -> Self {
        RelationId {
            kind: RelationKind::SemanticEquivalence,
            name: SEMANTIC_EQUIVALENCE.to_string(),
        }
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel:{}:{}", self.kind.tag(), self.name)
    }
}

impl FromStr for RelationId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let rest = s
            .strip_prefix("rel:")
            .ok_or_else(|| format!("relation id {s:?} lacks a rel: prefix"))?;
        let (tag, name) = rest
            .split_once(':')
            .ok_or_else(|| format!("relation id {s:?} lacks a kind tag"))?;
        let kind =
            RelationKind::from_tag(tag).ok_or_else(|| format!("unknown relation kind {tag:?}"))?;
        RelationId::new(kind, name).map_err(|e| e.to_string())
    }
}

/// Part-of-speech tag of a synset. Sememes are always `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Unknown,
}

impl Pos {
    pub const ALL: [Pos; 5] = [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv, Pos::Unknown];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adj => "adj",
            Pos::Adv => "adv",
            Pos::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "noun" | "n" => Pos::Noun,
            "verb" | "v" => Pos::Verb,
            "adj" | "a" | "s" => Pos::Adj,
            "adv" | "r" => Pos::Adv,
            "unknown" => Pos::Unknown,
            other => return Err(format!("unknown POS tag {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "valid" => Ok(Split::Valid),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split {other:?}")),
        }
    }
}
