use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use pierce_core::euler::{inv_e_bracket, inv_e_within};
use pierce_core::exponent::{check_k2_expansion, exponent_budget, gamma, optimize_gamma};
use proptest::prelude::*;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-10_000i64..=10_000, 1i64..=10_000).prop_map(|(p, q)| r(p, q))
}

fn feasible_point() -> impl Strategy<Value = (BigRational, BigRational)> {
    // delta in [0, 1/18), lambda in [0, 1/3 - delta]
    (0i64..100_000, 0i64..=100_000).prop_map(|(i, j)| {
        let delta = r(i, 18 * 100_000);
        let lambda = (r(1, 3) - &delta) * r(j, 100_000);
        (delta, lambda)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_matches_hand_recompute(d in rational(), l in rational()) {
        let f1 = &l - r(2, 1) * &d;
        let f2 = d.clone();
        let f3 = r(4, 63) - r(349, 84) * &d - r(13, 84) * &l;
        let want = f1.clone().min(f2.clone()).min(f3.clone());
        let p = gamma(&d, &l);
        prop_assert_eq!(p.forms, vec![f1, f2, f3]);
        prop_assert_eq!(p.gamma, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn optimum_dominates_feasible_points((d, l) in feasible_point()) {
        let p = gamma(&d, &l);
        prop_assert!(p.feasible());
        prop_assert!(p.gamma <= r(2, 177));
    }
}

#[test]
fn optimum_and_budget() {
    let opt = optimize_gamma();
    assert!(opt.point.feasible());
    assert_eq!(
        (
            opt.point.delta.clone(),
            opt.point.lambda.clone(),
            opt.value.clone()
        ),
        (r(2, 177), r(2, 59), r(2, 177))
    );
    assert_eq!(
        exponent_budget(&r(2, 177), &r(6, 177)).overall,
        r(1, 3) - r(2, 177)
    );
    assert_eq!(
        exponent_budget(&BigRational::zero(), &BigRational::zero()).overall,
        r(1, 3)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn brackets_straddle_inverse_e(m in 1usize..200) {
        // 40 digits of 1/e, good for m up to about 30
        let inv_e = BigRational::new(
            "3678794411714423215955237701614608674458".parse::<BigInt>().unwrap(),
            BigInt::from(10).pow(40),
        );
        let b = inv_e_bracket(m);
        let slack = BigRational::new(BigInt::one(), BigInt::from(10).pow(39));
        prop_assert!(b.lo() < b.hi());
        prop_assert!(b.lo() - &slack <= inv_e && inv_e <= b.hi() + &slack);
    }

    #[test]
    fn requested_width_is_met(e in 1u32..300) {
        let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(e));
        let b = inv_e_within(&tol);
        prop_assert!(b.width() < tol);
    }
}

#[test]
fn k2_expansion_error_is_cubic() {
    for k in 3..=50u64 {
        let e = check_k2_expansion(k).unwrap();
        let k3 = BigRational::from_integer(BigInt::from(k).pow(3));
        let worst = e.lo().abs().max(e.hi().abs());
        assert!(worst * k3 <= BigRational::from_integer(5.into()), "k = {k}");
        // leading term = 1 + 1/k^2 + E(k) > 1
        let lead_lo = e.lo() + BigRational::one() + r(1, (k * k) as i64);
        assert!(lead_lo > BigRational::one(), "k = {k}");
    }
}
