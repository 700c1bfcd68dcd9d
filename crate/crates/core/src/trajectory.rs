//! Orbits of `x -> n mod x`, the step count `P(a, n)`, and Pierce digits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::MAX_N;

/// One step of the process: `n mod x`.
#[inline]
pub fn mod_step(n: u64, x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::Domain(
            "mod_step with x = 0: the orbit has already terminated".into(),
        ));
    }
    Ok(n % x)
}

/// `ceil(cbrt(n))`, exact.
pub fn ceil_cbrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).cbrt().round() as u64;
    let cube = |x: u64| (x as u128).pow(3);
    while r > 0 && cube(r - 1) >= n as u128 {
        r -= 1;
    }
    while cube(r) < n as u128 {
        r += 1;
    }
    r
}

/// Default step cap: `10 * ceil(n^(1/3)) + 64`.
pub fn default_cap(n: u64) -> usize {
    usize::try_from(ceil_cbrt(n))
        .ok()
        .and_then(|c| c.checked_mul(10))
        .and_then(|c| c.checked_add(64))
        .unwrap_or(usize::MAX)
}

fn check_pair(a: u64, n: u64) -> Result<()> {
    if a == 0 || n == 0 {
        return Err(Error::Domain(format!(
            "a and n must be positive (a = {a}, n = {n})"
        )));
    }
    if n > MAX_N {
        return Err(Error::Domain(format!("n = {n} exceeds 2^63 - 1")));
    }
    Ok(())
}

/// The full orbit `a_0 = a, a_{j+1} = n mod a_j` down to the first zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    n: u64,
    terms: Vec<u64>,
    quotients: Vec<u64>,
}

impl Trajectory {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn start(&self) -> u64 {
        self.terms[0]
    }

    /// `a_0, ..., a_P`, ending with the single zero.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// `floor(n / a_j)` for `j < P`.
    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// `P(a_0, n)`.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    /// The nonzero terms `a_0, ..., a_{P-1}`.
    pub fn nonzero_terms(&self) -> &[u64] {
        &self.terms[..self.terms.len() - 1]
    }
}

/// Computes the orbit of `a` under `x -> n mod x`.
///
/// `cap` bounds the number of recorded steps and defaults to
/// [`default_cap`]. Hitting it is an error, never a silent truncation.
pub fn trajectory(a: u64, n: u64, cap: Option<usize>) -> Result<Trajectory> {
    check_pair(a, n)?;
    let cap = cap.unwrap_or_else(|| default_cap(n));
    let mut terms = vec![a];
    let mut quotients = Vec::new();
    let mut x = a;
    while x != 0 {
        if quotients.len() == cap {
            return Err(Error::CapExceeded { a, n, cap });
        }
        quotients.push(n / x);
        x = n % x;
        terms.push(x);
    }
    Ok(Trajectory { n, terms, quotients })
}

/// `P(a, n)` in constant memory.
pub fn steps_count(a: u64, n: u64) -> Result<u64> {
    check_pair(a, n)?;
    let mut x = a;
    let mut steps = 0;
    while x != 0 {
        x = n % x;
        steps += 1;
    }
    Ok(steps)
}

/// Digits `b_1 < b_2 < ... < b_P` of the Pierce expansion of `a / n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PierceExpansion {
    digits: Vec<u64>,
    numerator: u64,
    denominator: u64,
}

impl PierceExpansion {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// `a / n` as an exact rational (not reduced to the source pair).
    pub fn source_ratio(&self) -> BigRational {
        BigRational::new(self.numerator.into(), self.denominator.into())
    }
}

/// Pierce digits of `a / n`; requires `1 <= a <= n`.
pub fn pierce_digits(a: u64, n: u64) -> Result<PierceExpansion> {
    check_pair(a, n)?;
    if a > n {
        return Err(Error::Domain(format!(
            "Pierce digits need a <= n (a = {a}, n = {n}); a/n must lie in (0, 1]"
        )));
    }
    let orbit = trajectory(a, n, None)?;
    Ok(PierceExpansion {
        digits: orbit.quotients,
        numerator: a,
        denominator: n,
    })
}

/// Exact value of `sum_i (-1)^(i+1) / (b_1 ... b_i)` for `expansion`.
pub fn reconstruct(expansion: &PierceExpansion) -> Result<BigRational> {
    reconstruct_digits(&expansion.digits)
}

/// Exact value of the alternating sum for a raw digit list.
///
/// Fails unless the digits are non-empty, positive and strictly increasing.
pub fn reconstruct_digits(digits: &[u64]) -> Result<BigRational> {
    let Some((&last, rest)) = digits.split_last() else {
        return Err(Error::InvalidExpansion("no digits".into()));
    };
    if digits[0] == 0 {
        return Err(Error::InvalidExpansion("digit 0".into()));
    }
    if let Some(i) = digits.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::InvalidExpansion(format!(
            "digits not strictly increasing at index {i}: {} then {}",
            digits[i],
            digits[i + 1]
        )));
    }
    // Nested form: x_i = (1 - x_{i+1}) / b_i with x_P = 1 / b_P, kept as an
    // unreduced fraction p/q.
    let mut p = BigInt::one();
    let mut q = BigInt::from(last);
    for &b in rest.iter().rev() {
        p = &q - p;
        q *= b;
    }
    Ok(BigRational::new(p, q))
}
