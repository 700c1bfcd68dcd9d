#![no_main]

use libfuzzer_sys::fuzz_target;
use pierce_core::ratio::{fmt_ratio, parse_ratio};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_ratio(s) {
        assert_eq!(parse_ratio(&fmt_ratio(&r)).unwrap(), r);
    }
});
