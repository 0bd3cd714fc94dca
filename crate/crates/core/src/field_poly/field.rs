use crate::error::{GrmError, Result};

/// The prime field F_p. Only 2, 3, 5 and 7 are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldParams {
    p: u8,
}

pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldParams {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(GrmError::NotPrime(p));
        }
        if p > 7 {
            return Err(GrmError::UnsupportedPrime(p));
        }
        Ok(FieldParams { p: p as u8 })
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn order(self) -> u64 {
        u64::from(self.p)
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u8 {
        v.rem_euclid(i64::from(self.p)) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((u16::from(a) * u16::from(b)) % u16::from(self.p)) as u8
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(self, a: u8, e: u32) -> u8 {
        let mut acc = 1u8;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Multiplicative inverse. `None` for zero.
    pub fn inv(self, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        (1..self.p).find(|&b| self.mul(a, b) == 1)
    }

    /// Reduces an exponent using `x^p = x` on F_p: the result is in `[0, p-1]`
    /// and `0` only when `e == 0`.
    #[inline]
    pub fn reduce_exponent(self, e: u64) -> u8 {
        if e == 0 {
            0
        } else {
            ((e - 1) % u64::from(self.p - 1) + 1) as u8
        }
    }

    pub fn elements(self) -> impl Iterator<Item = u8> {
        0..self.p
    }

    pub(crate) fn check_element(self, v: u32) -> Result<u8> {
        if v < u32::from(self.p) {
            Ok(v as u8)
        } else {
            Err(GrmError::ElementOutOfRange { value: v, p: self.p })
        }
    }
}

/// Index of a point in F_p^m with the first coordinate least significant.
pub fn point_index(p: u8, point: &[u8]) -> usize {
    point
        .iter()
        .rev()
        .fold(0usize, |acc, &d| acc * p as usize + d as usize)
}

/// Inverse of [`point_index`].
pub fn index_point(p: u8, m: usize, mut idx: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push((idx % p as usize) as u8);
        idx /= p as usize;
    }
    out
}
