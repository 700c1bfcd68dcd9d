//! Lower-bound witnesses for `P(n)`.
//!
//! The Archimedean witness starts the orbit at `floor((1 - 1/e) n)`. While
//! `a_{k-1}` stays inside `(n/(k+1), n/k]` the quotients run `1, 2, 3, ...`,
//! so `a_k = n - k a_{k-1}`, and `a_k` tracks the real sequence
//!
//! ```text
//! b_k = (-1)^k k! (S_k - 1/e) n,    S_k = sum_{j<=k} (-1)^j / j!
//! ```
//!
//! within `k!`. The arithmetic witness takes `n = lcm(1..m) - 1`, for which
//! the orbit from `m` steps down by one each time.
//!
//! All floors and inequalities involving `e` are decided by refining rational
//! brackets until the answer is forced; floats only feed report columns.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::euler::{
    alternating_partial_sum, factorial, inv_e_bracket, refine, terms_for_width, RationalInterval,
    INITIAL_TERMS,
};
use crate::trajectory::trajectory;
use crate::MAX_N;

/// Empirical default for the constant `c` in `k <= c log n / log log n`.
pub const DEFAULT_C: f64 = 0.3;

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `floor((1 - 1/e) n)`, certified.
pub fn archimedean_start(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::Domain(format!("archimedean start needs n >= 3, got {n}")));
    }
    let scaled = int(n);
    refine(INITIAL_TERMS, |inv_e| {
        // (1 - x) n over the bracket
        let range = inv_e.affine(&-&scaled, &scaled);
        let lo = range.lo().floor();
        (lo == range.hi().floor()).then(|| lo.to_integer().to_u64())
    })?
    .ok_or_else(|| Error::Overflow("archimedean start".into()))
}

/// `b_k` as a function of a `1/e` bracket.
fn b_from_bracket(k: u64, n: u64, inv_e: &RationalInterval) -> RationalInterval {
    let sign = if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let scale = int(sign * factorial(k) * n);
    let s_k = alternating_partial_sum(k as usize);
    inv_e.affine(&-&scale, &(&scale * s_k))
}

/// Series length that brings the `b_k` bracket under `tol`.
fn terms_for_b(k: u64, n: u64, tol: &BigRational) -> usize {
    terms_for_width(&(tol / int(factorial(k) * n)))
}

/// Rigorous bracket around `b_k` of width below `tol`.
pub fn predicted_b(k: u64, n: u64, tol: &BigRational) -> RationalInterval {
    b_from_bracket(k, n, &inv_e_bracket(terms_for_b(k, n, tol)))
}

/// Default width for [`predicted_b`]: `10^-6`.
pub fn default_b_tolerance() -> BigRational {
    BigRational::new(1.into(), 1_000_000.into())
}

/// Decides `b_k > n/(k+2) + k!` rigorously.
pub fn check_elementary_inequality(k: u64, n: u64) -> Result<bool> {
    if k == 0 || n < 2 {
        return Err(Error::Domain(format!(
            "need k >= 1 and n >= 2 (k = {k}, n = {n})"
        )));
    }
    let rhs = BigRational::new(n.into(), (k + 2).into()) + int(factorial(k));
    refine(INITIAL_TERMS, |inv_e| {
        match b_from_bracket(k, n, inv_e).compare(&rhs) {
            Some(Ordering::Greater) => Some(true),
            Some(_) => Some(false),
            None => None,
        }
    })
}

/// Smallest `n >= 2` from which [`check_elementary_inequality`] holds for
/// `k`; `None` if it never does. `b_k` is linear in `n`, so the inequality
/// is `n (b_k/n - 1/(k+2)) > k!` and the threshold is one certified floor.
pub fn elementary_threshold(k: u64) -> Result<Option<u64>> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let fact = int(factorial(k));
    let shift = BigRational::new(BigInt::one(), (k + 2).into());
    let floor = refine(INITIAL_TERMS, |inv_e| {
        let slope = b_from_bracket(k, 1, inv_e);
        let (d_lo, d_hi) = (slope.lo() - &shift, slope.hi() - &shift);
        if d_hi <= BigRational::zero() {
            return Some(None);
        }
        if d_lo <= BigRational::zero() {
            return None;
        }
        let (lo, hi) = ((&fact / d_hi).floor(), (&fact / d_lo).floor());
        (lo == hi).then_some(Some(lo))
    })?;
    match floor {
        None => Ok(None),
        Some(f) => f
            .to_integer()
            .to_u64()
            .and_then(|v| v.checked_add(1))
            .map(|v| Some(v.max(2)))
            .ok_or_else(|| Error::Overflow(format!("threshold for k = {k} exceeds 64 bits"))),
    }
}

/// `floor(c log n / log log n)`: how far the recurrence must hold.
pub fn required_steps(n: u64, c: f64) -> u64 {
    predicted_floor(n, c).max(0.0).floor() as u64
}

/// `c log n / log log n` (natural logs).
pub fn predicted_floor(n: u64, c: f64) -> f64 {
    let ln = (n as f64).ln();
    c * ln / ln.ln()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepCheck {
    pub k: u64,
    pub a_k: u64,
    /// `floor(n / a_{k-1})`; the recurrence needs it to equal `k`.
    pub quotient: u64,
    pub b_bracket: RationalInterval,
    pub bound: BigInt,
    /// `|a_k - b_k| <= k!`, decided on the bracket.
    pub within_bound: bool,
}

impl StepCheck {
    pub fn pass(&self) -> bool {
        self.quotient == self.k && self.within_bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub n: u64,
    pub start: u64,
    pub observed_length: usize,
    pub c: f64,
    pub predicted_floor: f64,
    /// `floor(predicted_floor)`.
    pub required_k: u64,
    /// Largest `k <= required_k` with every step up to `k` verified.
    pub validated_k: u64,
    /// Largest `k` with every step up to `k` verified, ignoring `c`.
    pub max_valid_k: u64,
    /// Steps checked, through the first failure if there is one.
    pub per_k: Vec<StepCheck>,
}

impl WitnessReport {
    /// Every step up to `required_k` verified.
    pub fn complete(&self) -> bool {
        self.validated_k >= self.required_k
    }

    /// The largest `c` for which the checks made here would all pass.
    pub fn max_valid_c(&self) -> f64 {
        let ln = (self.n as f64).ln();
        self.max_valid_k as f64 * ln.ln() / ln
    }
}

/// Runs the orbit from [`archimedean_start`] and certifies
/// `floor(n / a_{k-1}) = k` and `|a_k - b_k| <= k!` step by step.
///
/// A break before `required_k` is a finding recorded in the report, not an
/// error.
pub fn validate_witness(n: u64, c: f64) -> Result<WitnessReport> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    let start = archimedean_start(n)?;
    if start < 2 {
        return Err(Error::Domain(format!(
            "n = {n} is too small: archimedean start {start} < 2"
        )));
    }
    let orbit = trajectory(start, n, None)?;
    let terms = orbit.terms();
    let required_k = required_steps(n, c);
    let mut per_k = Vec::new();
    let mut max_valid_k = 0;
    for k in 1..=orbit.length() as u64 {
        let prev = terms[k as usize - 1];
        let a_k = terms[k as usize];
        let bound = factorial(k);
        let window = (int(a_k) - int(bound.clone()), int(a_k) + int(bound.clone()));
        let mut bracket = None;
        // start at width < 1 so the integer comparison is decidable
        let within_bound = refine(terms_for_b(k, n, &BigRational::one()), |inv_e| {
            let b = b_from_bracket(k, n, inv_e);
            let decided = if b.lo() >= &window.0 && b.hi() <= &window.1 {
                Some(true)
            } else if b.hi() < &window.0 || b.lo() > &window.1 {
                Some(false)
            } else {
                None
            };
            bracket = Some(b);
            decided
        })?;
        let step = StepCheck {
            k,
            a_k,
            quotient: n / prev,
            b_bracket: bracket.expect("refine evaluates at least once"),
            bound,
            within_bound,
        };
        let pass = step.pass();
        per_k.push(step);
        if !pass {
            break;
        }
        max_valid_k = k;
    }
    Ok(WitnessReport {
        n,
        start,
        observed_length: orbit.length(),
        c,
        predicted_floor: predicted_floor(n, c),
        required_k,
        validated_k: max_valid_k.min(required_k),
        max_valid_k,
        per_k,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticWitness {
    pub m: u64,
    pub n: u64,
    pub start: u64,
    pub guaranteed_length: u64,
    pub orbit: Vec<u64>,
}

/// Largest `m` with `lcm(1..m) - 1 <= 2^63 - 1`.
pub const MAX_ARITHMETIC_M: u64 = 42;

/// `n = lcm(1..m) - 1` with start `m`; the orbit is verified to be
/// `m, m-1, ..., 1, 0`.
pub fn arithmetic_witness(m: u64) -> Result<ArithmeticWitness> {
    if m < 2 {
        return Err(Error::Domain(format!("arithmetic witness needs m >= 2, got {m}")));
    }
    let mut l: u128 = 1;
    for j in 1..=m as u128 {
        l = l.lcm(&j);
        if l - 1 > MAX_N as u128 {
            return Err(Error::Overflow(format!(
                "lcm(1..{m}) - 1 exceeds 2^63 - 1 (m <= {MAX_ARITHMETIC_M} in 64-bit mode)"
            )));
        }
    }
    let n = (l - 1) as u64;
    let orbit = trajectory(m, n, None)?;
    let expected: Vec<u64> = (0..=m).rev().collect();
    if orbit.terms() != expected.as_slice() {
        return Err(Error::Domain(format!(
            "orbit of {m} mod {n} does not step down by one: {:?}",
            orbit.terms()
        )));
    }
    Ok(ArithmeticWitness {
        m,
        n,
        start: m,
        guaranteed_length: m,
        orbit: orbit.terms().to_vec(),
    })
}
