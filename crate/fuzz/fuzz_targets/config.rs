#![no_main]

use libfuzzer_sys::fuzz_target;
use sememe_cli::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let mut config = RunConfig::default();
        if config.apply_text(text, "fuzz").is_ok() {
            let _ = config.validate();
            let _ = config.echo();
        }
    }
});
