#![no_main]

use libfuzzer_sys::fuzz_target;
use sememe_core::fusion::{parse_predictions, write_predictions};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(results) = parse_predictions(text) {
        let out = write_predictions(&results);
        let again = parse_predictions(&out).expect("written dump re-parses");
        assert_eq!(write_predictions(&again), out);
    }
});
