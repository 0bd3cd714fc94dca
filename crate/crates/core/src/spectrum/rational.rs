use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GrmError, Result};

/// A non-negative rational `numerator / p^k` in canonical form: `p` does not
/// divide the numerator unless it is zero, and zero has `k = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PExactRational {
    p: u8,
    numerator: BigUint,
    p_exponent: u32,
}

impl PExactRational {
    pub fn new(p: u8, numerator: impl Into<BigUint>, p_exponent: u32) -> Self {
        let mut numerator = numerator.into();
        let mut k = p_exponent;
        let pb = BigUint::from(p);
        if numerator.is_zero() {
            k = 0;
        } else {
            while k > 0 {
                let (q, r) = numerator.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                numerator = q;
                k -= 1;
            }
        }
        PExactRational {
            p,
            numerator,
            p_exponent: k,
        }
    }

    pub fn zero(p: u8) -> Self {
        Self::new(p, 0u32, 0)
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn p_exponent(&self) -> u32 {
        self.p_exponent
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::from(self.p).pow(self.p_exponent)
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::from(self.denominator()),
        )
    }

    /// Converts an exact rational whose reduced denominator is a power of `p`.
    pub fn from_ratio(p: u8, q: &BigRational) -> Option<Self> {
        let num = q.numer().to_biguint()?;
        let mut den = q.denom().to_biguint()?;
        let pb = BigUint::from(p);
        let mut k = 0u32;
        while !den.is_one() {
            let (d, r) = den.div_rem(&pb);
            if !r.is_zero() {
                return None;
            }
            den = d;
            k += 1;
        }
        Some(Self::new(p, num, k))
    }

    /// Parses `l/p^k` (as printed by `Display`) or a plain `a/b`.
    pub fn parse(p: u8, text: &str) -> Result<Self> {
        let bad = || GrmError::InvalidRational(text.to_string());
        let t = text.trim();
        if let Some((num, den)) = t.split_once('/') {
            if let Some((base, exp)) = den.split_once('^') {
                let base: u8 = base.trim().parse().map_err(|_| bad())?;
                if base != p {
                    return Err(bad());
                }
                let k: u32 = exp.trim().parse().map_err(|_| bad())?;
                let n: BigUint = num.trim().parse().map_err(|_| bad())?;
                return Ok(Self::new(p, n, k));
            }
        }
        let q = crate::ratio::parse_ratio(t)?;
        Self::from_ratio(p, &q).ok_or_else(bad)
    }
}

impl Ord for PExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        // l1 / p^k1 vs l2 / p^k2  <=>  l1 p^k2 vs l2 p^k1
        let lhs = &self.numerator * BigUint::from(self.p).pow(other.p_exponent);
        let rhs = &other.numerator * BigUint::from(other.p).pow(self.p_exponent);
        lhs.cmp(&rhs).then(self.p.cmp(&other.p))
    }
}

impl PartialOrd for PExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `l/p^k`, e.g. `3/2^3`.
impl fmt::Display for PExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator, self.p, self.p_exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    #[test]
    fn canonical_form() {
        let q = PExactRational::new(2, 4u32, 5);
        assert_eq!(q.numerator(), &BigUint::from(1u32));
        assert_eq!(q.p_exponent(), 3);
        let z = PExactRational::new(3, 0u32, 7);
        assert_eq!(z.p_exponent(), 0);
        assert_eq!(z, PExactRational::zero(3));
        assert_eq!(PExactRational::new(3, 9u32, 2).to_string(), "1/3^0");
    }

    #[test]
    fn ordering_is_by_value() {
        let a = PExactRational::new(2, 3u32, 3);
        let b = PExactRational::new(2, 1u32, 1);
        assert!(a < b);
        assert_eq!(a.to_ratio(), ratio(3, 8));
    }

    #[test]
    fn parse_both_forms() {
        let a = PExactRational::parse(2, "3/2^3").unwrap();
        assert_eq!(a, PExactRational::new(2, 3u32, 3));
        assert_eq!(PExactRational::parse(2, "6/16").unwrap(), a);
        assert!(PExactRational::parse(2, "1/3").is_err());
        assert!(PExactRational::parse(2, "1/3^1").is_err());
        assert_eq!(PExactRational::from_ratio(3, &ratio(1, 2)), None);
    }
}
