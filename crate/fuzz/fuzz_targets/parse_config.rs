#![no_main]

use libfuzzer_sys::fuzz_target;
use pierce_cli::config::parse_config;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_config(s) {
            assert!(cfg.workers != Some(0));
            assert!(cfg.checkpoint_interval != Some(0));
        }
    }
});
