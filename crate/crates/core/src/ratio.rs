//! Exact rational helpers: the "a/b" text form used in every document.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{GrmError, Result};

/// Formats as `a/b` with the denominator always present (`0/1`, `1/1`).
pub fn format_ratio(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `a/b` or a bare integer `a`. Decimal points and exponents are
/// rejected: the value must be exact.
pub fn parse_ratio(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || GrmError::InvalidRational(text.to_string());
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

pub(crate) fn in_unit_interval(q: &BigRational) -> bool {
    !q.is_negative() && q <= &BigRational::one()
}
