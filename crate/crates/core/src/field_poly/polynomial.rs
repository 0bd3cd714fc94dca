use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::field::FieldParams;
use crate::error::{GrmError, Result};

/// Total degree of a polynomial. The zero polynomial has the distinguished
/// degree [`Degree::Zero`], which orders below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    Zero,
    Finite(u32),
}

impl Degree {
    /// `true` when a polynomial of this degree belongs to a code of order `r`.
    pub fn at_most(self, r: u32) -> bool {
        match self {
            Degree::Zero => true,
            Degree::Finite(d) => d <= r,
        }
    }

    pub fn value(self) -> Option<u32> {
        match self {
            Degree::Zero => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Finite degree, with the zero polynomial mapped to 0.
    pub fn or_zero(self) -> u32 {
        self.value().unwrap_or(0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Zero => write!(f, "ZERO"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A reduced multivariate polynomial over F_p: every exponent lies in
/// `[0, p-1]` and no zero coefficient is stored, so equality of polynomials is
/// equality of the functions they define on F_p^m.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct Polynomial {
    params: FieldParams,
    m: usize,
    terms: BTreeMap<Vec<u8>, u8>,
}

impl Polynomial {
    pub fn zero(params: FieldParams, m: usize) -> Self {
        Polynomial {
            params,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(params: FieldParams, m: usize, c: u8) -> Self {
        let mut f = Self::zero(params, m);
        let c = c % params.p();
        if c != 0 {
            f.terms.insert(vec![0; m], c);
        }
        f
    }

    /// The coordinate function `x_i` (1-based).
    pub fn variable(params: FieldParams, m: usize, i: usize) -> Result<Self> {
        if i == 0 || i > m {
            return Err(GrmError::VariableOutOfRange { index: i, m });
        }
        let mut exps = vec![0; m];
        exps[i - 1] = 1;
        Ok(Self::monomial(params, exps, 1))
    }

    /// `coeff * prod x_i^{exps[i]}`, reducing exponents and the coefficient.
    pub fn monomial(params: FieldParams, exps: Vec<u8>, coeff: u8) -> Self {
        let m = exps.len();
        Self::from_terms(params, m, [(exps, u32::from(coeff))])
    }

    /// Builds the reduced polynomial from arbitrary (unreduced) terms.
    /// Exponent vectors must have length `m`.
    pub fn from_terms<I, E>(params: FieldParams, m: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (E, u32)>,
        E: AsRef<[u8]>,
    {
        let mut f = Self::zero(params, m);
        for (exps, coeff) in terms {
            let exps = exps.as_ref();
            assert_eq!(exps.len(), m, "exponent vector length must equal m");
            let red: Vec<u8> = exps
                .iter()
                .map(|&e| params.reduce_exponent(u64::from(e)))
                .collect();
            f.add_term(red, (coeff % u32::from(params.p())) as u8);
        }
        f
    }

    fn add_term(&mut self, exps: Vec<u8>, coeff: u8) {
        if coeff == 0 {
            return;
        }
        let p = self.params;
        match self.terms.get_mut(&exps) {
            Some(c) => {
                *c = p.add(*c, coeff);
                if *c == 0 {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, coeff);
            }
        }
    }

    #[inline]
    pub fn params(&self) -> FieldParams {
        self.params
    }

    #[inline]
    pub fn p(&self) -> u8 {
        self.params.p()
    }

    /// Number of variables.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `true` for the zero polynomial and the nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> u8 {
        self.terms.get(&vec![0; self.m]).copied().unwrap_or(0)
    }

    /// Terms in ascending lexicographic order of exponent vector.
    pub fn terms(&self) -> impl Iterator<Item = (&[u8], u8)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u8]) -> u8 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| u32::from(x)).sum::<u32>())
            .max()
            .map_or(Degree::Zero, Degree::Finite)
    }

    pub fn evaluate(&self, x: &[u8]) -> Result<u8> {
        if x.len() != self.m {
            return Err(GrmError::DimensionMismatch {
                expected: self.m,
                got: x.len(),
            });
        }
        let p = self.params;
        for &v in x {
            p.check_element(u32::from(v))?;
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[u8]) -> u8 {
        let p = self.params;
        let mut acc = 0u8;
        for (exps, &c) in &self.terms {
            let mut t = c;
            for (&xi, &e) in x.iter().zip(exps) {
                if e != 0 {
                    t = p.mul(t, p.pow(xi, u32::from(e)));
                    if t == 0 {
                        break;
                    }
                }
            }
            acc = p.add(acc, t);
        }
        acc
    }

    pub fn scale(&self, c: u8) -> Self {
        let p = self.params;
        let c = c % p.p();
        let mut out = Self::zero(p, self.m);
        if c != 0 {
            for (e, &v) in &self.terms {
                out.terms.insert(e.clone(), p.mul(v, c));
            }
        }
        out
    }

    /// Adds `c * other` in place.
    pub fn add_scaled(&mut self, other: &Polynomial, c: u8) {
        self.assert_compatible(other);
        let p = self.params;
        let c = c % p.p();
        if c == 0 {
            return;
        }
        for (e, &v) in &other.terms {
            self.add_term(e.clone(), p.mul(v, c));
        }
    }

    /// `self^e` as a function on F_p^m; `self^0 = 1`.
    pub fn pow(&self, e: u64) -> Self {
        let p = self.params;
        if e == 0 {
            return Self::constant(p, self.m, 1);
        }
        // f^p = f pointwise, so exponents reduce like variable exponents.
        let e = p.reduce_exponent(e);
        let mut acc = self.clone();
        for _ in 1..e {
            acc = &acc * self;
        }
        acc
    }

    /// Composition `f(h_1, ..., h_m)`; the `h_i` share a field and a variable
    /// count, which becomes the variable count of the result.
    pub fn substitute(&self, hs: &[Polynomial]) -> Result<Polynomial> {
        if hs.len() != self.m {
            return Err(GrmError::DimensionMismatch {
                expected: self.m,
                got: hs.len(),
            });
        }
        let p = self.params;
        let new_m = hs.first().map_or(0, |h| h.m);
        for h in hs {
            if h.params != p || h.m != new_m {
                return Err(GrmError::ParamsMismatch(
                    "substituted polynomials must share p and m".into(),
                ));
            }
        }
        // powers[i][e] = h_i^e
        let powers: Vec<Vec<Polynomial>> = hs
            .iter()
            .map(|h| {
                let mut v = vec![Polynomial::constant(p, new_m, 1)];
                for e in 1..p.p() {
                    let next = &v[e as usize - 1] * h;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Polynomial::zero(p, new_m);
        for (exps, &c) in &self.terms {
            let mut t = Polynomial::constant(p, new_m, c);
            for (i, &e) in exps.iter().enumerate() {
                if e != 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out.add_scaled(&t, 1);
        }
        Ok(out)
    }

    /// Re-embeds into `new_m >= m` variables (the extra variables are unused).
    pub fn embed(&self, new_m: usize) -> Polynomial {
        assert!(new_m >= self.m);
        let mut out = Polynomial::zero(self.params, new_m);
        for (e, &c) in &self.terms {
            let mut ne = e.clone();
            ne.resize(new_m, 0);
            out.terms.insert(ne, c);
        }
        out
    }

    fn assert_compatible(&self, other: &Polynomial) {
        assert!(
            self.params == other.params && self.m == other.m,
            "polynomials over different (p, m): ({}, {}) vs ({}, {})",
            self.p(),
            self.m,
            other.p(),
            other.m
        );
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, self.params.neg(1));
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.params.neg(1))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let p = self.params;
        let mut out = Polynomial::zero(p, self.m);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let exps: Vec<u8> = ea
                    .iter()
                    .zip(eb)
                    .map(|(&a, &b)| p.reduce_exponent(u64::from(a) + u64::from(b)))
                    .collect();
                out.add_term(exps, p.mul(ca, cb));
            }
        }
        out
    }
}

/// Prints highest exponent vectors first, e.g. `2*x1^2*x3 + x2 + 1`. The
/// output parses back to the same polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let factors: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            match (c, factors.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", factors.join("*"))?,
                (_, false) => write!(f, "{}*{}", c, factors.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermJson {
    coeff: u32,
    exps: Vec<u32>,
}

/// Canonical JSON form: terms sorted lexicographically by exponent vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct PolyJson {
    p: u32,
    m: usize,
    terms: Vec<TermJson>,
}

impl From<Polynomial> for PolyJson {
    fn from(f: Polynomial) -> Self {
        PolyJson {
            p: u32::from(f.p()),
            m: f.m,
            terms: f
                .terms
                .iter()
                .map(|(e, &c)| TermJson {
                    coeff: u32::from(c),
                    exps: e.iter().map(|&x| u32::from(x)).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for Polynomial {
    type Error = GrmError;
    fn try_from(j: PolyJson) -> Result<Self> {
        let params = FieldParams::new(j.p)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            if t.exps.len() != j.m {
                return Err(GrmError::DimensionMismatch {
                    expected: j.m,
                    got: t.exps.len(),
                });
            }
            let exps: Vec<u8> = t
                .exps
                .iter()
                .map(|&e| params.reduce_exponent(u64::from(e)))
                .collect();
            terms.push((exps, t.coeff));
        }
        Ok(Polynomial::from_terms(params, j.m, terms))
    }
}
