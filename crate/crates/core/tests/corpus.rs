//! Replays the checked-in fuzz seeds through the fuzz targets' invariants on stable.

use std::fs;
use std::path::PathBuf;

use sememe_core::fusion::{parse_predictions, write_predictions};
use sememe_core::graph::parse_pos;
use sememe_core::snapshot::Snapshot;
use sememe_core::{EmbeddingTable, SemanticVectorStore, TripletStore};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn triplet_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("triplets") {
        if let Ok(store) = TripletStore::parse(&text) {
            let tsv = store.to_tsv(true);
            let again = TripletStore::parse(&tsv).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(again.to_tsv(true), tsv, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn pos_seeds() {
    let results: Vec<_> = seeds("pos")
        .into_iter()
        .map(|(_, t)| parse_pos(&t).is_ok())
        .collect();
    assert!(results.contains(&true) && results.contains(&false));
}

#[test]
fn snapshot_seeds() {
    for (name, text) in seeds("snapshot") {
        let _ = Snapshot::parse(&text);
        let table = EmbeddingTable::parse_snapshot(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let out = table.to_snapshot_text();
        assert_eq!(
            EmbeddingTable::parse_snapshot(&out)
                .unwrap()
                .to_snapshot_text(),
            out
        );
    }
}

#[test]
fn vector_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("vectors") {
        if let Ok(store) = SemanticVectorStore::parse(&text) {
            SemanticVectorStore::parse(&store.to_text()).unwrap_or_else(|e| panic!("{name}: {e}"));
            parsed += 1;
        }
    }
    assert!(parsed >= 1);
}

#[test]
fn prediction_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("predictions") {
        if let Ok(results) = parse_predictions(&text) {
            let out = write_predictions(&results);
            let again = parse_predictions(&out).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(write_predictions(&again), out, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 2);
}
