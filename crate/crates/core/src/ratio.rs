//! The `p/q` text form for exact rationals.
//!
//! Every exact rational that leaves the toolkit (JSON reports, CSV bound
//! columns, CLI arguments) uses this form. Output always carries an explicit
//! denominator, so `2` is written `2/1`; input accepts either.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRatioError {
    #[error("empty rational")]
    Empty,
    #[error("malformed integer {0:?}")]
    BadInteger(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

/// Renders `r` in lowest terms as `p/q` with `q > 0`.
pub fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, `-p/q` or a bare integer `p`.
pub fn parse_ratio(s: &str) -> Result<BigRational, ParseRatioError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRatioError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (parse_int(p, true)?, parse_int(q, false)?),
        None => (parse_int(s, true)?, BigInt::from(1)),
    };
    if den.is_zero() {
        return Err(ParseRatioError::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

fn parse_int(s: &str, allow_sign: bool) -> Result<BigInt, ParseRatioError> {
    let s = s.trim();
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        _ => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRatioError::BadInteger(s.to_string()));
    }
    let value: BigInt = digits
        .parse()
        .map_err(|_| ParseRatioError::BadInteger(s.to_string()))?;
    Ok(if digits.len() != s.len() { -value } else { value })
}

/// Lossy conversion for human-facing columns only.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Scale both parts down together when either overflows f64.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let num = (r.numer().abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let den = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let v = num / den;
    if r.is_negative() {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(fmt_ratio(&q(6, 177)), "2/59");
        assert_eq!(fmt_ratio(&q(4, 2)), "2/1");
        assert_eq!(fmt_ratio(&q(-3, 4)), "-3/4");
        assert_eq!(fmt_ratio(&q(0, 5)), "0/1");
    }

    #[test]
    fn parses_forms() {
        assert_eq!(parse_ratio("2/177").unwrap(), q(2, 177));
        assert_eq!(parse_ratio(" 6/177 ").unwrap(), q(2, 59));
        assert_eq!(parse_ratio("-3/4").unwrap(), q(-3, 4));
        assert_eq!(parse_ratio("7").unwrap(), q(7, 1));
        assert_eq!(parse_ratio("0").unwrap(), q(0, 1));
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_ratio(""), Err(ParseRatioError::Empty));
        assert_eq!(parse_ratio("1/0"), Err(ParseRatioError::ZeroDenominator));
        assert!(parse_ratio("1/-2").is_err());
        assert!(parse_ratio("--1").is_err());
        assert!(parse_ratio("1/2/3").is_err());
        assert!(parse_ratio("0x10").is_err());
        assert!(parse_ratio("+1").is_err());
        assert!(parse_ratio("-").is_err());
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = BigRational::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400));
        assert!((ratio_to_f64(&big) - 3.0).abs() < 1e-12);
    }
}
