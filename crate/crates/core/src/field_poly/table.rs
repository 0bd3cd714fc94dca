use super::field::FieldParams;
use super::polynomial::Polynomial;
use crate::budget::{checked_pow, Budget};
use crate::error::{GrmError, Result};

/// Packed storage: one bit per point over F_2, one byte per point otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Packed {
    Bits(Vec<u64>),
    Bytes(Vec<u8>),
}

/// Values of a function F_p^m -> F_p, with the point `(x_1, ..., x_m)` stored
/// at index `sum x_i p^(i-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvaluationTable {
    params: FieldParams,
    m: usize,
    len: usize,
    data: Packed,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl EvaluationTable {
    pub fn zeros(params: FieldParams, m: usize) -> Self {
        let len = (params.p() as usize).pow(m as u32);
        let data = if params.p() == 2 {
            Packed::Bits(vec![0; words_for(len)])
        } else {
            Packed::Bytes(vec![0; len])
        };
        EvaluationTable {
            params,
            m,
            len,
            data,
        }
    }

    /// Builds a table from one field element per point.
    pub fn from_values(params: FieldParams, m: usize, values: &[u8]) -> Result<Self> {
        let len = (params.p() as usize).pow(m as u32);
        if values.len() != len {
            return Err(GrmError::DimensionMismatch {
                expected: len,
                got: values.len(),
            });
        }
        for &v in values {
            params.check_element(u32::from(v))?;
        }
        let mut t = Self::zeros(params, m);
        match &mut t.data {
            Packed::Bits(w) => {
                for (i, &v) in values.iter().enumerate() {
                    w[i / 64] |= u64::from(v) << (i % 64);
                }
            }
            Packed::Bytes(b) => b.copy_from_slice(values),
        }
        Ok(t)
    }

    #[inline]
    pub fn params(&self) -> FieldParams {
        self.params
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of points, `p^m`.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, idx: usize) -> u8 {
        match &self.data {
            Packed::Bits(w) => ((w[idx / 64] >> (idx % 64)) & 1) as u8,
            Packed::Bytes(b) => b[idx],
        }
    }

    pub fn values(&self) -> Vec<u8> {
        match &self.data {
            Packed::Bits(_) => (0..self.len).map(|i| self.get(i)).collect(),
            Packed::Bytes(b) => b.clone(),
        }
    }

    /// Packed bit words when `p = 2`.
    pub fn bits(&self) -> Option<&[u64]> {
        match &self.data {
            Packed::Bits(w) => Some(w),
            Packed::Bytes(_) => None,
        }
    }

    /// One byte per point when `p > 2`.
    pub fn bytes(&self) -> Option<&[u8]> {
        match &self.data {
            Packed::Bits(_) => None,
            Packed::Bytes(b) => Some(b),
        }
    }

    /// Number of points with a nonzero value.
    pub fn weight(&self) -> u64 {
        match &self.data {
            Packed::Bits(w) => w.iter().map(|x| u64::from(x.count_ones())).sum(),
            Packed::Bytes(b) => b.iter().filter(|&&v| v != 0).count() as u64,
        }
    }

    /// `hist[a]` = number of points with value `a`.
    pub fn histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.params.p() as usize];
        match &self.data {
            Packed::Bits(_) => {
                let ones = self.weight();
                hist[1] = ones;
                hist[0] = self.len as u64 - ones;
            }
            Packed::Bytes(b) => {
                for &v in b {
                    hist[v as usize] += 1;
                }
            }
        }
        hist
    }

    /// `self += c * other` pointwise.
    pub fn add_scaled(&mut self, other: &EvaluationTable, c: u8) {
        assert!(self.params == other.params && self.m == other.m);
        let p = self.params;
        let c = c % p.p();
        if c == 0 {
            return;
        }
        match (&mut self.data, &other.data) {
            (Packed::Bits(a), Packed::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= *y;
                }
            }
            (Packed::Bytes(a), Packed::Bytes(b)) => {
                for (x, &y) in a.iter_mut().zip(b) {
                    *x = p.add(*x, p.mul(y, c));
                }
            }
            _ => unreachable!("packing is determined by p"),
        }
    }

    /// Converts back to the unique reduced polynomial with these values.
    pub fn to_polynomial(&self) -> Polynomial {
        let p = self.params;
        let pu = p.p() as usize;
        let mut coeffs = self.values();
        let inv = inverse_vandermonde(p);
        let mut stride = 1usize;
        let mut buf = vec![0u8; pu];
        for _ in 0..self.m {
            let block = stride * pu;
            for base in (0..self.len).step_by(block) {
                for off in 0..stride {
                    for (d, slot) in buf.iter_mut().enumerate() {
                        *slot = coeffs[base + off + d * stride];
                    }
                    for e in 0..pu {
                        let mut acc = 0u8;
                        for (d, &v) in buf.iter().enumerate() {
                            acc = p.add(acc, p.mul(inv[e][d], v));
                        }
                        coeffs[base + off + e * stride] = acc;
                    }
                }
            }
            stride = block;
        }
        let m = self.m;
        Polynomial::from_terms(
            p,
            m,
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(idx, &c)| (super::field::index_point(p.p(), m, idx), u32::from(c))),
        )
    }
}

/// Inverse of the matrix `V[d][e] = d^e` over F_p (with `0^0 = 1`); row `e`
/// maps point values on one axis to the coefficient of `x^e`.
fn inverse_vandermonde(p: FieldParams) -> Vec<Vec<u8>> {
    let n = p.p() as usize;
    // Augmented [V | I], Gauss-Jordan.
    let mut a: Vec<Vec<u8>> = (0..n)
        .map(|d| {
            let mut row: Vec<u8> = (0..n).map(|e| p.pow(d as u8, e as u32)).collect();
            row.extend((0..n).map(|j| u8::from(j == d)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0).expect("Vandermonde is invertible");
        a.swap(col, piv);
        let inv = p.inv(a[col][col]).unwrap();
        for x in a[col].iter_mut() {
            *x = p.mul(*x, inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = p.sub(*x, p.mul(f, *y));
                }
            }
        }
    }
    // V^{-1} maps values (indexed by d) to coefficients (indexed by e): the
    // augmented half is V^{-1} with rows indexed by e.
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Values of one monomial on every point, built as a tensor product of the
/// per-variable power tables.
pub fn monomial_values(params: FieldParams, exps: &[u8]) -> Vec<u8> {
    let p = params;
    let pu = p.p() as usize;
    let mut vals = vec![1u8];
    for &e in exps {
        let axis: Vec<u8> = (0..p.p()).map(|d| p.pow(d, u32::from(e))).collect();
        let mut next = Vec::with_capacity(vals.len() * pu);
        for &a in &axis {
            next.extend(vals.iter().map(|&v| p.mul(v, a)));
        }
        vals = next;
    }
    vals
}

pub fn monomial_table(params: FieldParams, exps: &[u8]) -> EvaluationTable {
    EvaluationTable::from_values(params, exps.len(), &monomial_values(params, exps))
        .expect("monomial values are in range")
}

/// Tabulates `f` on all of F_p^m, accumulating one monomial table at a time.
pub fn tabulate(f: &Polynomial, budget: &Budget) -> Result<EvaluationTable> {
    let p = f.params();
    budget.check_points(
        "evaluation table",
        checked_pow(p.order(), f.m()),
    )?;
    let mut acc = EvaluationTable::zeros(p, f.m());
    for (exps, c) in f.terms() {
        acc.add_scaled(&monomial_table(p, exps), c);
    }
    Ok(acc)
}
