#![no_main]

use libfuzzer_sys::fuzz_target;
use sememe_core::snapshot::Snapshot;
use sememe_core::EmbeddingTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = Snapshot::parse(text);
    if let Ok(table) = EmbeddingTable::parse_snapshot(text) {
        let out = table.to_snapshot_text();
        let again = EmbeddingTable::parse_snapshot(&out).expect("written snapshot re-parses");
        assert_eq!(again.to_snapshot_text(), out);
    }
});
