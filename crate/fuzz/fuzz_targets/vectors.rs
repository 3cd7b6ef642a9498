#![no_main]

use libfuzzer_sys::fuzz_target;
use sememe_core::SemanticVectorStore;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(store) = SemanticVectorStore::parse(text) {
            let _ = SemanticVectorStore::parse(&store.to_text()).expect("written vectors re-parse");
        }
    }
});
