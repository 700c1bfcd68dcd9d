//! Rigorous rational brackets for `1/e`.
//!
//! Partial sums `S_m = sum_{j=0}^{m} (-1)^j / j!` alternate around `1/e`, so
//! two consecutive sums bracket it with width `1/(m+1)!`. Every floor or
//! inequality that involves `e` is decided on such brackets, refining until
//! the answer no longer depends on where `1/e` sits inside the bracket.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::ratio::{fmt_ratio, ratio_to_f64};

/// Series length used before any refinement; `1/21!` is about `2e-20`.
pub const INITIAL_TERMS: usize = 20;

/// Refinement gives up past this many series terms. Every decision made by
/// this crate is settled far earlier; the ceiling only bounds runaway input.
pub const MAX_TERMS: usize = 1 << 14;

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RationalInterval {
    /// Builds the interval spanned by two endpoints in either order.
    pub fn spanning(a: BigRational, b: BigRational) -> Self {
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: BigRational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Image under `x -> scale * x + shift`.
    pub fn affine(&self, scale: &BigRational, shift: &BigRational) -> Self {
        RationalInterval::spanning(scale * &self.lo + shift, scale * &self.hi + shift)
    }

    /// Where the whole interval sits relative to `x`: `Less` if every point
    /// is below `x`, `Greater` if every point is above, `None` if it
    /// straddles or touches `x`.
    pub fn compare(&self, x: &BigRational) -> Option<Ordering> {
        if &self.hi < x {
            Some(Ordering::Less)
        } else if &self.lo > x {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (ratio_to_f64(&self.lo) + ratio_to_f64(&self.hi)) / 2.0
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_ratio(&self.lo), fmt_ratio(&self.hi))
    }
}

/// `k!` in arbitrary precision.
pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * j)
}

/// Exact `S_k = sum_{j=0}^{k} (-1)^j / j!`.
pub fn alternating_partial_sum(k: usize) -> BigRational {
    // With N_k = k! * S_k: N_0 = 1 and N_k = k * N_{k-1} + (-1)^k.
    let mut numer = BigInt::one();
    let mut fact = BigInt::one();
    for j in 1..=k {
        numer *= j;
        if j % 2 == 0 {
            numer += 1;
        } else {
            numer -= 1;
        }
        fact *= j;
    }
    BigRational::new(numer, fact)
}

/// The bracket `[S_m, S_{m+1}]` (ordered) around `1/e`, of width `1/(m+1)!`.
pub fn inv_e_bracket(m: usize) -> RationalInterval {
    let s_m = alternating_partial_sum(m);
    let step = BigRational::new(BigInt::one(), factorial(m as u64 + 1));
    let s_next = if (m + 1).is_multiple_of(2) {
        &s_m + step
    } else {
        &s_m - step
    };
    RationalInterval::spanning(s_m, s_next)
}

/// Smallest series length whose `1/e` bracket is narrower than `tol`.
pub fn terms_for_width(tol: &BigRational) -> usize {
    assert!(tol.is_positive(), "bracket tolerance must be positive");
    let mut fact = BigInt::one();
    let mut m = 0usize;
    // width of inv_e_bracket(m) is 1/(m+1)!
    loop {
        fact *= m + 1;
        if BigRational::from_integer(fact.clone()) * tol > BigRational::one() {
            return m;
        }
        m += 1;
    }
}

/// `1/e` bracketed to width below `tol`.
pub fn inv_e_within(tol: &BigRational) -> RationalInterval {
    inv_e_bracket(terms_for_width(tol))
}

/// Runs `decide` on successively tighter `1/e` brackets, starting at `start`
/// terms and doubling, until it returns an answer.
pub fn refine<T>(start: usize, mut decide: impl FnMut(&RationalInterval) -> Option<T>) -> Result<T> {
    let mut m = start.max(1);
    loop {
        if let Some(answer) = decide(&inv_e_bracket(m)) {
            return Ok(answer);
        }
        if m >= MAX_TERMS {
            return Err(Error::Undecided { terms: m });
        }
        m = (m * 2).min(MAX_TERMS);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    // 1/e to 40 digits, independent of the series code.
    const INV_E_40: &str =
        "3678794411714423215955237701614608674458/10000000000000000000000000000000000000000";

    fn inv_e_approx() -> BigRational {
        crate::ratio::parse_ratio(INV_E_40).unwrap()
    }

    #[test]
    fn partial_sums_small() {
        assert_eq!(alternating_partial_sum(0), BigRational::one());
        assert_eq!(alternating_partial_sum(1), BigRational::zero());
        assert_eq!(alternating_partial_sum(2), BigRational::new(1.into(), 2.into()));
        assert_eq!(alternating_partial_sum(3), BigRational::new(1.into(), 3.into()));
        assert_eq!(alternating_partial_sum(4), BigRational::new(3.into(), 8.into()));
    }

    #[test]
    fn brackets_straddle_inv_e() {
        let ulp = BigRational::new(1.into(), BigInt::from(10).pow(39));
        for m in 1..30 {
            let b = inv_e_bracket(m);
            assert_eq!(b.width(), BigRational::new(1.into(), factorial(m as u64 + 1)));
            // the 40-digit truncation is within 1e-39 of 1/e
            assert!(b.lo() <= &(inv_e_approx() + &ulp), "m = {m}");
            assert!(b.hi() >= &(inv_e_approx() - &ulp), "m = {m}");
        }
    }

    #[test]
    fn width_target() {
        let tol = BigRational::new(1.into(), BigInt::from(10).pow(30));
        let m = terms_for_width(&tol);
        assert!(inv_e_bracket(m).width() < tol);
        assert!(inv_e_bracket(m - 1).width() >= tol);
        assert_eq!(m, 28);
    }

    #[test]
    fn refine_stops_when_decided() {
        let third = BigRational::new(1.into(), 3.into());
        let got = refine(1, |b| b.compare(&third)).unwrap();
        assert_eq!(got, Ordering::Greater);
    }

    #[test]
    fn affine_flips_on_negative_scale() {
        let i = RationalInterval::spanning(
            BigRational::from_integer(1.into()),
            BigRational::from_integer(2.into()),
        );
        let j = i.affine(&BigRational::from_integer((-1).into()), &BigRational::zero());
        assert_eq!(j.lo(), &BigRational::from_integer((-2).into()));
        assert_eq!(j.hi(), &BigRational::from_integer((-1).into()));
    }
}
