#![no_main]

use libfuzzer_sys::fuzz_target;
use pierce_cli::records::parse_record_json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_record_json(s) {
        assert_eq!(parse_record_json(&t.to_json()).unwrap(), t);
    }
});
