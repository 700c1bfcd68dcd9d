use num_bigint::BigInt;
use num_rational::BigRational;
use pierce_core::dyadic::{
    arch_bound, certificates, check_arch_bound, check_divisibility, check_quotient_monotone, profile,
    scale_of,
};
use pierce_core::trajectory;
use proptest::prelude::*;

fn big_pair() -> impl Strategy<Value = (u64, u64)> {
    (1u64..=10_000_000).prop_flat_map(|n| (1..=n, Just(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn orbit_invariants_hold((a, n) in big_pair()) {
        let t = trajectory(a, n, None).unwrap();
        let p = profile(&t);
        prop_assert_eq!(p.total(), t.length() as u64);
        prop_assert!(check_arch_bound(&p).pass());
        prop_assert!(check_quotient_monotone(&t).pass());
        prop_assert!(check_divisibility(&t).pass());
        for c in certificates(&t).unwrap() {
            prop_assert!(c.verify());
        }
    }

    #[test]
    fn scale_brackets_value(a in 1u64..=u64::MAX / 4) {
        // 2^i < a <= 2^(i+1)
        let i = scale_of(a);
        let a = BigRational::from_integer(a.into());
        let two = BigRational::from_integer(2.into());
        let lo = if i >= 0 {
            BigRational::from_integer(BigInt::from(1) << i as usize)
        } else {
            BigRational::new(1.into(), 2.into())
        };
        prop_assert!(lo < a && a <= lo * two);
    }
}

#[test]
fn every_orbit_up_to_300() {
    for n in 1..=300u64 {
        for a in 1..=n {
            let t = trajectory(a, n, None).unwrap();
            let p = profile(&t);
            for (&i, &count) in p.buckets() {
                assert!(
                    BigRational::from_integer(count.into()) <= arch_bound(n, i),
                    "({a}, {n}) at 2^{i}"
                );
            }
            assert!(certificates(&t).unwrap().iter().all(|c| c.verify()));
        }
    }
}
