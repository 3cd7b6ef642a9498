#![no_main]

use libfuzzer_sys::fuzz_target;
use sememe_core::TripletStore;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // whatever parses must survive its own export
    if let Ok(store) = TripletStore::parse(text) {
        let tsv = store.to_tsv(true);
        let again = TripletStore::parse(&tsv).expect("exported store re-parses");
        assert_eq!(again.to_tsv(true), tsv);
    }
});
