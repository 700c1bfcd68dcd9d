#![no_main]

use libfuzzer_sys::fuzz_target;
use pierce_cli::records::parse_record_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_record_csv(s) {
        assert!(t
            .rows
            .windows(2)
            .all(|w| w[0].n < w[1].n && w[0].pmax < w[1].pmax));
        assert_eq!(parse_record_csv(&t.to_csv()).unwrap().rows, t.rows);
    }
});
