#![no_main]

use libfuzzer_sys::fuzz_target;
use pierce_cli::checkpoint::parse_checkpoint;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(cp) = parse_checkpoint(s) {
        assert!(cp.from <= cp.next && cp.next <= cp.to.saturating_add(1));
        assert_eq!(parse_checkpoint(&cp.to_json()).unwrap(), cp);
    }
});
