use num_rational::BigRational;
use pierce_core::euler::RationalInterval;
use pierce_core::witness::{
    arithmetic_witness, check_elementary_inequality, predicted_b, required_steps, validate_witness, DEFAULT_C,
};
use pierce_core::{steps_count, trajectory};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn arithmetic_witness_by_direct_iteration() {
    for m in 2..=30u64 {
        let w = arithmetic_witness(m).unwrap();
        let lcm = (1..=m).fold(1u128, |l, j| l / gcd(l, j as u128) * j as u128);
        assert_eq!(w.n as u128, lcm - 1);
        assert_eq!(steps_count(m, w.n).unwrap(), m);
        assert_eq!(trajectory(m, w.n, None).unwrap().length() as u64, m);
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn witness_on_random_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let n = rng.gen_range(10_000u64..=1_000_000_000_000);
        let report = validate_witness(n, DEFAULT_C).unwrap();
        assert!(
            report.complete(),
            "n = {n}: valid up to c = {}",
            report.max_valid_c()
        );
    }
}

#[test]
fn elementary_inequality_at_reference_scales() {
    for n in [1_000_000u64, 1_000_000_000, 1_000_000_000_000] {
        let kmax = required_steps(n, DEFAULT_C);
        assert!(kmax >= 1);
        for k in 1..=kmax {
            assert!(check_elementary_inequality(k, n).unwrap(), "k = {k}, n = {n}");
        }
    }
}

fn floor_if_decided(b: &RationalInterval) -> Option<BigRational> {
    let lo = b.lo().floor();
    (lo == b.hi().floor()).then_some(lo)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn refining_b_keeps_decisions(k in 1u64..12, n in 3u64..=1_000_000_000_000, e in 1u32..8) {
        let coarse = predicted_b(k, n, &BigRational::new(1.into(), 10u64.pow(e).into()));
        let fine = predicted_b(k, n, &BigRational::new(1.into(), 10u64.pow(e + 12).into()));
        prop_assert!(coarse.lo() <= coarse.hi());
        prop_assert!(fine.lo() <= fine.hi());
        prop_assert!(fine.lo() <= coarse.hi() && coarse.lo() <= fine.hi());
        if let Some(f) = floor_if_decided(&coarse) {
            prop_assert_eq!(floor_if_decided(&fine), Some(f));
        }
    }
}
