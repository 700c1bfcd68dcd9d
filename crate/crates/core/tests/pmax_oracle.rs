use pierce_core::pmax::{pmax_dp, pmax_naive, steps_table, PmaxEngine};
use pierce_core::steps_count;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn dp_matches_naive_up_to_2000() {
    let mut engine = PmaxEngine::new();
    for n in 1..=2000 {
        let dp = engine.compute(n).unwrap();
        assert_eq!(dp, pmax_naive(n).unwrap(), "n = {n}");
    }
}

#[test]
fn dp_matches_naive_on_random_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut engine = PmaxEngine::new();
    for _ in 0..200 {
        let n = rng.gen_range(1..=100_000);
        assert_eq!(engine.compute(n).unwrap(), pmax_naive(n).unwrap(), "n = {n}");
    }
}

#[test]
fn pmax_dominates_sampled_starts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let n = rng.gen_range(1..=200_000);
        let p = pmax_dp(n).unwrap();
        for _ in 0..100 {
            let a = rng.gen_range(1..=n);
            assert!(u64::from(p.pmax) >= steps_count(a, n).unwrap());
        }
    }
}

#[test]
fn table_agrees_with_direct_iteration() {
    let n = 3 * (1 << 20) / 2 + 17;
    let table = steps_table(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let a = rng.gen_range(1..=n);
        assert_eq!(u64::from(table.get(a).unwrap()), steps_count(a, n).unwrap());
    }
    let mut next = 1;
    for (first, chunk) in table.chunks() {
        assert_eq!(first, next);
        next += chunk.len() as u64;
    }
    assert_eq!(next, n + 1);
    assert_eq!(table.result(), pierce_core::pmax::pmax_dp_with_digest(n).unwrap());
}

#[test]
fn digest_is_stable_across_engines() {
    let mut engine = PmaxEngine::new();
    engine.compute(99_999).unwrap();
    let a = engine.compute_with_digest(4321).unwrap();
    let b = pierce_core::pmax::pmax_dp_with_digest(4321).unwrap();
    assert_eq!(a, b);
    assert!(a.table_digest.is_some());
}
