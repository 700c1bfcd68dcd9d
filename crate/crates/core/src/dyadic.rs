//! Dyadic occupancy of orbits and the structural facts behind it.
//!
//! A term `a` lies at scale `A = 2^i` when `A < a <= 2A`. The exponent `i`
//! starts at `-1` so that `a = 1` (the scale `A = 1/2`) has a bucket and the
//! buckets partition the nonzero terms of every orbit.
//!
//! The checks here never use floating point: bound comparisons are exact
//! rationals, divisibility and quotient checks are integer arithmetic. Only
//! [`BoundFit`] (a log-log regression over measured statistics) is real-valued.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ratio::ratio_to_f64;
use crate::trajectory::{trajectory, Trajectory};

/// Exponent `i` of the dyadic scale `A = 2^i`; always `>= -1`.
pub type ScaleExponent = i32;

/// The unique `i` with `2^i < a <= 2^(i+1)`, for `a >= 1`.
#[inline]
pub fn scale_of(a: u64) -> ScaleExponent {
    debug_assert!(a >= 1);
    (u64::BITS - (a - 1).leading_zeros()) as i32 - 1
}

/// `2^i` as an exact rational.
pub fn scale_value(i: ScaleExponent) -> BigRational {
    if i >= 0 {
        BigRational::from_integer(BigInt::one() << i as u32)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-i) as u32)
    }
}

/// Occupancy counts `T(A)` for one orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicProfile {
    n: u64,
    start: u64,
    buckets: BTreeMap<ScaleExponent, u64>,
}

impl DyadicProfile {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `a_0` of the source orbit; with `n` it identifies the trajectory.
    pub fn start(&self) -> u64 {
        self.start
    }

    /// Non-empty buckets only, ascending by exponent.
    pub fn buckets(&self) -> &BTreeMap<ScaleExponent, u64> {
        &self.buckets
    }

    /// `T(2^i)`, zero for empty buckets.
    pub fn count(&self, i: ScaleExponent) -> u64 {
        self.buckets.get(&i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.buckets.values().sum()
    }
}

pub fn profile(orbit: &Trajectory) -> DyadicProfile {
    let mut buckets = BTreeMap::new();
    for &a in orbit.nonzero_terms() {
        *buckets.entry(scale_of(a)).or_insert(0) += 1;
    }
    DyadicProfile {
        n: orbit.n(),
        start: orbit.start(),
        buckets,
    }
}

/// Profile of the orbit of `(a, n)` in one call.
pub fn profile_pair(a: u64, n: u64) -> Result<DyadicProfile> {
    Ok(profile(&trajectory(a, n, None)?))
}

/// `n / (2A) + 2` for `A = 2^i`.
pub fn arch_bound(n: u64, i: ScaleExponent) -> BigRational {
    BigRational::from_integer(n.into()) / (scale_value(i) * BigInt::from(2)) + BigInt::from(2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketCheck {
    pub exponent: ScaleExponent,
    pub count: u64,
    pub bound: BigRational,
    pub pass: bool,
}

impl BucketCheck {
    pub fn new(n: u64, exponent: ScaleExponent, count: u64) -> Self {
        let bound = arch_bound(n, exponent);
        let pass = BigRational::from_integer(count.into()) <= bound;
        BucketCheck {
            exponent,
            count,
            bound,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchReport {
    pub n: u64,
    pub rows: Vec<BucketCheck>,
}

impl ArchReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Compares every occupied bucket against `T(A) <= n/(2A) + 2`.
pub fn check_arch_bound(p: &DyadicProfile) -> ArchReport {
    ArchReport {
        n: p.n,
        rows: p
            .buckets
            .iter()
            .map(|(&i, &t)| BucketCheck::new(p.n, i, t))
            .collect(),
    }
}

/// Pass/fail with the index of the first failing position, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOutcome {
    pub checked: usize,
    pub first_violation: Option<usize>,
}

impl CheckOutcome {
    pub fn pass(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// `floor(n / a_{j+1}) > floor(n / a_j)` for consecutive nonzero terms with
/// `a_j <= n`. Violation index is `j`.
pub fn check_quotient_monotone(orbit: &Trajectory) -> CheckOutcome {
    let n = orbit.n();
    let mut checked = 0;
    for (j, w) in orbit.nonzero_terms().windows(2).enumerate() {
        if w[0] > n {
            continue;
        }
        checked += 1;
        if n / w[1] <= n / w[0] {
            return CheckOutcome {
                checked,
                first_violation: Some(j),
            };
        }
    }
    CheckOutcome {
        checked,
        first_violation: None,
    }
}

/// `a_j | n + a_j - a_{j+1}` for every step `a_j -> a_{j+1}` with `a_j > 0`
/// (the final step into 0 included). Violation index is `j`.
pub fn check_divisibility(orbit: &Trajectory) -> CheckOutcome {
    let n = orbit.n() as u128;
    let mut checked = 0;
    for (j, w) in orbit.terms().windows(2).enumerate() {
        checked += 1;
        let (cur, next) = (w[0] as u128, w[1] as u128);
        if !(n + cur - next).is_multiple_of(cur) {
            return CheckOutcome {
                checked,
                first_violation: Some(j),
            };
        }
    }
    CheckOutcome {
        checked,
        first_violation: None,
    }
}

/// Exact integers behind two consecutive jumps `a -> a - h -> a - h - h'`:
/// `a b = n + h` and `(a - h)(b + k) = n + h'`, with the prediction
/// `H0 = n k / (b (b + k))` for `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoStepCert {
    pub n: u64,
    pub a: u64,
    pub h: u64,
    pub h_prime: u64,
    pub b: u64,
    pub k: i128,
    pub h0: BigRational,
    pub residual: BigRational,
}

impl TwoStepCert {
    /// Re-checks both product identities and `b = floor(n/a) + 1` from the
    /// stored integers.
    pub fn verify(&self) -> bool {
        let n = self.n as i128;
        let (a, h, hp, b) = (
            self.a as i128,
            self.h as i128,
            self.h_prime as i128,
            self.b as i128,
        );
        let first = a.checked_mul(b) == Some(n + h);
        let second = (a - h).checked_mul(b + self.k) == Some(n + hp);
        first && second && b == n / a + 1
    }
}

/// Builds the two-step certificate for consecutive terms
/// `a_prev2 -> a_prev1 -> a_curr` of the orbit for `n`.
pub fn two_step_decompose(a_prev2: u64, a_prev1: u64, a_curr: u64, n: u64) -> Result<TwoStepCert> {
    if n == 0 || a_prev2 == 0 {
        return Err(Error::Domain("terms and n must be positive".into()));
    }
    if a_prev2 > n {
        return Err(Error::Domain(format!("a = {a_prev2} exceeds n = {n}")));
    }
    if a_prev1 != n % a_prev2 || a_prev1 == 0 || a_curr != n % a_prev1 {
        return Err(Error::Domain(format!(
            "({a_prev2}, {a_prev1}, {a_curr}) are not consecutive terms of the orbit for n = {n}"
        )));
    }
    let h = a_prev2 - a_prev1;
    let h_prime = a_prev1 - a_curr;
    let wide_n = n as u128;
    let (b, rem) = (wide_n + h as u128).div_rem(&(a_prev2 as u128));
    let (b_next, rem_next) = (wide_n + h_prime as u128).div_rem(&(a_prev1 as u128));
    if rem != 0 || rem_next != 0 {
        return Err(Error::Domain(format!(
            "no integral certificate for ({a_prev2}, {a_prev1}, {a_curr}), n = {n}"
        )));
    }
    let k = b_next as i128 - b as i128;
    let h0 = BigRational::new(
        BigInt::from(n) * BigInt::from(k),
        BigInt::from(b) * BigInt::from(b_next),
    );
    let residual = BigRational::from_integer(h.into()) - &h0;
    Ok(TwoStepCert {
        n,
        a: a_prev2,
        h,
        h_prime,
        b: b as u64,
        k,
        h0,
        residual,
    })
}

/// Certificates for every consecutive triple of `orbit` whose first term is
/// at most `n`.
pub fn certificates(orbit: &Trajectory) -> Result<Vec<TwoStepCert>> {
    let n = orbit.n();
    orbit
        .terms()
        .windows(3)
        .filter(|w| w[0] <= n)
        .map(|w| two_step_decompose(w[0], w[1], w[2], n))
        .collect()
}

/// Certificates with `a ~ 2^i` and `h + h' <= window`.
pub fn certificates_in_window(orbit: &Trajectory, i: ScaleExponent, window: u64) -> Result<Vec<TwoStepCert>> {
    Ok(certificates(orbit)?
        .into_iter()
        .filter(|c| scale_of(c.a) == i && c.h + c.h_prime <= window)
        .collect())
}

/// `ceil(n^(p/q))` for a rational exponent in `[0, 1]`, exact.
pub fn ceil_rational_power(n: u64, exponent: &BigRational) -> u64 {
    assert!(!exponent.is_negative() && exponent <= &BigRational::one());
    let p = exponent.numer().to_u32().expect("exponent numerator fits u32");
    let q = exponent.denom().to_u32().expect("exponent denominator fits u32");
    let target = BigUint::from(n).pow(p);
    // smallest t with t^q >= n^p
    let (mut lo, mut hi) = (0u64, n.max(1));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if BigUint::from(mid).pow(q) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// `H = floor(10 A / T0)` (at least 1) with `T0 = ceil(n^(1/3 - delta))`.
pub fn default_window(n: u64, i: ScaleExponent, delta: &BigRational) -> u64 {
    let third = BigRational::new(1.into(), 3.into());
    let t0 = ceil_rational_power(n, &(third - delta)).max(1);
    let h = (scale_value(i) * BigInt::from(10) / BigInt::from(t0)).floor();
    h.to_integer().to_u64().unwrap_or(u64::MAX).max(1)
}

/// Distribution of `|h - H0| / (A H / n)` over a certificate corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSurvey {
    pub scale: ScaleExponent,
    pub window: u64,
    pub count: usize,
    pub max_statistic: BigRational,
    /// Index into the corpus of the first certificate attaining the maximum.
    pub argmax: usize,
    pub mean: f64,
    pub median: f64,
    pub p90: f64,
}

/// `|residual| / (A H / n)` for one certificate.
pub fn residual_statistic(cert: &TwoStepCert, i: ScaleExponent, window: u64) -> BigRational {
    let unit = scale_value(i) * BigInt::from(window) / BigInt::from(cert.n);
    cert.residual.abs() / unit
}

pub fn residual_survey(corpus: &[TwoStepCert], i: ScaleExponent, window: u64) -> Result<ResidualSurvey> {
    if corpus.is_empty() {
        return Err(Error::Domain("residual survey over an empty corpus".into()));
    }
    if window == 0 {
        return Err(Error::Domain("window H must be positive".into()));
    }
    let mut stats = Vec::with_capacity(corpus.len());
    let mut max_statistic = BigRational::zero();
    let mut argmax = 0;
    for (idx, cert) in corpus.iter().enumerate() {
        if scale_of(cert.a) != i || cert.h + cert.h_prime > window {
            return Err(Error::Domain(format!(
                "certificate {idx} (a = {}, h + h' = {}) is outside scale 2^{i} / window {window}",
                cert.a,
                cert.h + cert.h_prime
            )));
        }
        let s = residual_statistic(cert, i, window);
        if idx == 0 || s > max_statistic {
            max_statistic = s.clone();
            argmax = idx;
        }
        stats.push(ratio_to_f64(&s));
    }
    stats.sort_by(f64::total_cmp);
    let quantile = |q: f64| stats[((stats.len() - 1) as f64 * q).round() as usize];
    Ok(ResidualSurvey {
        scale: i,
        window,
        count: corpus.len(),
        max_statistic,
        argmax,
        mean: stats.iter().sum::<f64>() / stats.len() as f64,
        median: quantile(0.5),
        p90: quantile(0.9),
    })
}

/// Least-squares fit of `log statistic = log C + e log n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundFit {
    pub scale_points: Vec<(u64, f64)>,
    pub fitted_exponent: f64,
    pub fitted_constant: f64,
}

pub fn fit_power_law(points: Vec<(u64, f64)>) -> Result<BoundFit> {
    if points.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 scale points for a slope, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(n, s)| n == 0 || !(s > 0.0 && s.is_finite())) {
        return Err(Error::Domain(
            "scale points need n >= 1 and a finite positive statistic".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, s)| s.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all scale points share one n".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(BoundFit {
        scale_points: points,
        fitted_exponent: slope,
        fitted_constant: (my - slope * mx).exp(),
    })
}

/// `max_A T(A) / sqrt(A)` for one profile.
pub fn sqrt_statistic(p: &DyadicProfile) -> f64 {
    p.buckets
        .iter()
        .map(|(&i, &t)| t as f64 / 2f64.powf(i as f64 / 2.0))
        .fold(0.0, f64::max)
}

/// `S(n) = max over a in [1, n] and A of T(A) / sqrt(A)`.
pub fn max_sqrt_statistic(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    // slot = exponent + 1
    const SLOTS: usize = 65;
    let inv_sqrt: Vec<f64> = (0..SLOTS).map(|s| 2f64.powf(-(s as f64 - 1.0) / 2.0)).collect();
    let mut counts = [0u32; SLOTS];
    let mut best = 0.0f64;
    for a in 1..=n {
        let mut x = a;
        let mut touched = 0u128;
        while x != 0 {
            let slot = (scale_of(x) + 1) as usize;
            counts[slot] += 1;
            touched |= 1 << slot;
            x = n % x;
        }
        while touched != 0 {
            let slot = touched.trailing_zeros() as usize;
            best = best.max(counts[slot] as f64 * inv_sqrt[slot]);
            counts[slot] = 0;
            touched &= touched - 1;
        }
    }
    Ok(best)
}

/// Fits the growth of [`max_sqrt_statistic`] across `n_values`.
pub fn sqrt_bound_fit(n_values: &[u64]) -> Result<BoundFit> {
    if n_values.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 scale points for a slope, got {}",
            n_values.len()
        )));
    }
    let points = n_values
        .iter()
        .map(|&n| Ok((n, max_sqrt_statistic(n)?)))
        .collect::<Result<Vec<_>>>()?;
    fit_power_law(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn scales() {
        assert_eq!(scale_of(1), -1);
        assert_eq!(scale_of(2), 0);
        assert_eq!(scale_of(3), 1);
        assert_eq!(scale_of(4), 1);
        assert_eq!(scale_of(5), 2);
        assert_eq!(scale_of(8), 2);
        assert_eq!(scale_of(9), 3);
        assert_eq!(scale_of(u64::MAX), 63);
        assert_eq!(scale_value(-1), q(1, 2));
        assert_eq!(scale_value(3), q(8, 1));
    }

    #[test]
    fn profile_of_worked_example() {
        let p = profile_pair(13, 35).unwrap();
        let got: Vec<_> = p.buckets().iter().map(|(&i, &t)| (i, t)).collect();
        assert_eq!(got, vec![(-1, 1), (0, 1), (1, 1), (2, 1), (3, 2)]);
        assert_eq!(p.total(), 6);
        assert_eq!(p.count(7), 0);
    }

    #[test]
    fn profile_of_single_step() {
        let p = profile_pair(35, 35).unwrap();
        assert_eq!(p.buckets().len(), 1);
        assert_eq!(p.count(scale_of(35)), 1);
    }

    #[test]
    fn arch_bound_examples() {
        let r = check_arch_bound(&profile_pair(13, 35).unwrap());
        let a8 = r.rows.iter().find(|c| c.exponent == 3).unwrap();
        assert_eq!(a8.count, 2);
        assert_eq!(a8.bound, q(67, 16)); // 35/16 + 2 = 4.1875
        assert!(a8.pass && r.pass());

        let r = check_arch_bound(&profile_pair(22, 35).unwrap());
        let a8 = r.rows.iter().find(|c| c.exponent == 3).unwrap();
        assert_eq!((a8.count, a8.pass), (2, true));

        assert!(BucketCheck::new(35, 5, 0).pass);
        assert_eq!(arch_bound(35, -1), q(37, 1));
    }

    #[test]
    fn quotient_monotone_examples() {
        let t = trajectory(13, 35, None).unwrap();
        assert!(check_quotient_monotone(&t).pass());
        let t = trajectory(7, 35, None).unwrap();
        let out = check_quotient_monotone(&t);
        assert_eq!((out.checked, out.pass()), (0, true));
        let t = trajectory(22, 35, None).unwrap();
        assert_eq!(t.quotients(), &[1, 2, 3, 4, 11, 17, 35]);
        assert!(check_quotient_monotone(&t).pass());
    }

    #[test]
    fn divisibility_examples() {
        let t = trajectory(13, 35, None).unwrap();
        let out = check_divisibility(&t);
        assert!(out.pass());
        assert_eq!(out.checked, 6);
        assert!(check_divisibility(&trajectory(5, 35, None).unwrap()).pass());
    }

    #[test]
    fn two_step_examples() {
        let c = two_step_decompose(13, 9, 8, 35).unwrap();
        assert_eq!((c.h, c.h_prime, c.b, c.k), (4, 1, 3, 1));
        assert_eq!(c.h0, q(35, 12));
        assert_eq!(c.residual, q(13, 12));
        assert!(c.verify());

        let c = two_step_decompose(9, 8, 3, 35).unwrap();
        assert_eq!((c.h, c.h_prime, c.b, c.k), (1, 5, 4, 1));
        assert_eq!(c.h0, q(7, 4));
        assert_eq!(c.residual, q(-3, 4));

        // a repeated term (h = 0) is never consecutive
        assert!(matches!(two_step_decompose(13, 13, 9, 35), Err(Error::Domain(_))));
        assert!(matches!(two_step_decompose(13, 8, 3, 35), Err(Error::Domain(_))));
        assert!(matches!(two_step_decompose(36, 35, 0, 35), Err(Error::Domain(_))));
        // triple running into the final zero
        assert!(two_step_decompose(2, 1, 0, 35).unwrap().verify());
    }

    #[test]
    fn survey_examples() {
        let c = two_step_decompose(13, 9, 8, 35).unwrap();
        let s = residual_survey(std::slice::from_ref(&c), 3, 5).unwrap();
        assert_eq!(s.max_statistic, q(91, 96));
        assert_eq!(s.count, 1);

        // h = H0 exactly: n = 12, orbit 7 -> 5 -> 2
        let exact = two_step_decompose(7, 5, 2, 12).unwrap();
        assert_eq!(exact.h0, q(2, 1));
        assert_eq!(exact.residual, q(0, 1));
        let s = residual_survey(&[exact], 2, 5).unwrap();
        assert_eq!(s.max_statistic, q(0, 1));

        assert!(residual_survey(&[], 3, 5).is_err());
        assert!(residual_survey(std::slice::from_ref(&c), 2, 5).is_err());
        assert!(residual_survey(&[c], 3, 4).is_err());
    }

    #[test]
    fn sqrt_statistic_single_orbit() {
        let p = profile_pair(13, 35).unwrap();
        let a8 = p.count(3) as f64 / 8f64.sqrt();
        assert!((a8 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        // the a = 1 bucket dominates this orbit: 1 / sqrt(1/2)
        assert!((sqrt_statistic(&p) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fit_of_constant_statistic_is_flat() {
        let f = fit_power_law(vec![(1000, 2.5), (10_000, 2.5), (100_000, 2.5)]).unwrap();
        assert!(f.fitted_exponent.abs() < 1e-12);
        assert!((f.fitted_constant - 2.5).abs() < 1e-9);
        let f = fit_power_law(vec![(10, 10.0), (100, 100.0), (1000, 1000.0)]).unwrap();
        assert!((f.fitted_exponent - 1.0).abs() < 1e-12);
        assert!(fit_power_law(vec![(10, 1.0), (100, 1.0)]).is_err());
        assert!(sqrt_bound_fit(&[10, 100]).is_err());
        assert!(fit_power_law(vec![(10, 1.0), (10, 2.0), (10, 3.0)]).is_err());
    }

    #[test]
    fn max_sqrt_statistic_matches_profiles() {
        for n in [1u64, 2, 35, 97, 360] {
            let direct = (1..=n)
                .map(|a| sqrt_statistic(&profile_pair(a, n).unwrap()))
                .fold(0.0, f64::max);
            assert!((direct - max_sqrt_statistic(n).unwrap()).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn rational_powers() {
        let third = q(1, 3);
        assert_eq!(ceil_rational_power(27, &third), 3);
        assert_eq!(ceil_rational_power(28, &third), 4);
        assert_eq!(ceil_rational_power(1, &q(19, 59)), 1);
        // (10^6)^(19/59) = 10^(114/59) ~ 85.6
        assert_eq!(ceil_rational_power(1_000_000, &q(19, 59)), 86);
        let delta = q(2, 177);
        assert_eq!(default_window(1_000_000, 12, &delta), 40960 / 86);
        assert_eq!(default_window(35, -1, &delta), 1);
    }
}
