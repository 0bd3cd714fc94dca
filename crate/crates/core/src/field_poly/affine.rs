use super::field::FieldParams;
use super::linalg;
use super::polynomial::Polynomial;
use crate::error::{GrmError, Result};

/// An invertible affine change of variables `x -> L x + t` on F_p^m.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    params: FieldParams,
    linear: Vec<Vec<u8>>,
    translation: Vec<u8>,
}

impl AffineMap {
    /// `linear` is row-major `m x m`; rejects singular matrices.
    pub fn new(params: FieldParams, linear: Vec<Vec<u8>>, translation: Vec<u8>) -> Result<Self> {
        let m = translation.len();
        if linear.len() != m {
            return Err(GrmError::DimensionMismatch {
                expected: m,
                got: linear.len(),
            });
        }
        for row in &linear {
            if row.len() != m {
                return Err(GrmError::DimensionMismatch {
                    expected: m,
                    got: row.len(),
                });
            }
            for &v in row {
                params.check_element(u32::from(v))?;
            }
        }
        for &v in &translation {
            params.check_element(u32::from(v))?;
        }
        if linalg::rank(params, &linear) != m {
            return Err(GrmError::SingularMap { p: params.p() });
        }
        Ok(AffineMap {
            params,
            linear,
            translation,
        })
    }

    pub fn identity(params: FieldParams, m: usize) -> Self {
        let linear = (0..m)
            .map(|i| (0..m).map(|j| u8::from(i == j)).collect())
            .collect();
        AffineMap {
            params,
            linear,
            translation: vec![0; m],
        }
    }

    pub fn translation(params: FieldParams, t: Vec<u8>) -> Result<Self> {
        let mut a = Self::identity(params, t.len());
        for &v in &t {
            params.check_element(u32::from(v))?;
        }
        a.translation = t;
        Ok(a)
    }

    /// Exchanges coordinates `i` and `j` (1-based).
    pub fn swap(params: FieldParams, m: usize, i: usize, j: usize) -> Result<Self> {
        for k in [i, j] {
            if k == 0 || k > m {
                return Err(GrmError::VariableOutOfRange { index: k, m });
            }
        }
        let mut a = Self::identity(params, m);
        a.linear.swap(i - 1, j - 1);
        Ok(a)
    }

    pub fn m(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &[Vec<u8>] {
        &self.linear
    }

    pub fn translation_vector(&self) -> &[u8] {
        &self.translation
    }

    pub fn apply(&self, x: &[u8]) -> Vec<u8> {
        let p = self.params;
        self.linear
            .iter()
            .zip(&self.translation)
            .map(|(row, &t)| {
                row.iter()
                    .zip(x)
                    .fold(t, |acc, (&a, &xi)| p.add(acc, p.mul(a, xi)))
            })
            .collect()
    }

    /// The coordinate polynomials `(L x + t)_i`.
    pub fn coordinate_polynomials(&self) -> Vec<Polynomial> {
        let p = self.params;
        let m = self.m();
        self.linear
            .iter()
            .zip(&self.translation)
            .map(|(row, &t)| {
                let mut terms: Vec<(Vec<u8>, u32)> = vec![(vec![0; m], u32::from(t))];
                for (j, &a) in row.iter().enumerate() {
                    let mut e = vec![0u8; m];
                    e[j] = 1;
                    terms.push((e, u32::from(a)));
                }
                Polynomial::from_terms(p, m, terms)
            })
            .collect()
    }
}

/// `f(A x)`, reduced.
pub fn apply_affine(f: &Polynomial, a: &AffineMap) -> Result<Polynomial> {
    if a.params != f.params() {
        return Err(GrmError::ParamsMismatch("affine map over a different field".into()));
    }
    if a.m() != f.m() {
        return Err(GrmError::DimensionMismatch {
            expected: f.m(),
            got: a.m(),
        });
    }
    f.substitute(&a.coordinate_polynomials())
}
