#![no_main]

use libfuzzer_sys::fuzz_target;
use sememe_core::graph::parse_pos;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_pos(text);
    }
});
