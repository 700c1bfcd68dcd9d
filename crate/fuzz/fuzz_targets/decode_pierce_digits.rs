#![no_main]

use libfuzzer_sys::fuzz_target;
use num_traits::{One, Zero};
use pierce_core::trajectory::reconstruct_digits;

// each 8 bytes is one little-endian digit
fuzz_target!(|data: &[u8]| {
    let digits: Vec<u64> = data
        .chunks_exact(8)
        .take(64)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Ok(x) = reconstruct_digits(&digits) {
        assert!(x > Zero::zero() && x <= One::one());
    }
});
