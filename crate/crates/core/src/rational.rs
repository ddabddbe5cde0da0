//! Helpers for exact rationals at the text boundary.
//!
//! Rationals are always written as `p/q` in lowest terms with `q > 0`,
//! integers included (`2/1`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serializer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {input:?} as a rational p/q")]
pub struct ParseRationalError {
    pub input: String,
}

pub fn format_ratio(q: &BigRational) -> String {
    // BigRational is kept reduced with a positive denominator
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_ratio(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `floor(1/eps)` for a positive rational.
pub fn floor_reciprocal(eps: &BigRational) -> BigInt {
    assert!(eps.is_positive(), "threshold must be positive");
    (BigRational::one() / eps).floor().to_integer()
}

pub(crate) fn serialize_ratio<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(q))
}

pub(crate) fn serialize_ratio_vec<S: Serializer>(
    v: &[BigRational],
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_ratio))
}

pub(crate) fn serialize_bigint_str<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}
