use crate::error::{GrmError, Result};
use crate::field_poly::{FieldParams, Polynomial};

/// The code `RM_p(r, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeParams {
    pub field: FieldParams,
    pub r: u32,
    pub m: usize,
}

impl CodeParams {
    pub fn new(p: u32, r: u32, m: usize) -> Result<Self> {
        Ok(CodeParams {
            field: FieldParams::new(p)?,
            r,
            m,
        })
    }

    #[inline]
    pub fn p(&self) -> u8 {
        self.field.p()
    }

    /// Exponent vectors of the reduced monomials of total degree at most `r`,
    /// in graded lexicographic order: by degree, then with higher powers of
    /// earlier variables first (`1, x1, x2, ..., x1^2, x1 x2, ...`).
    pub fn monomials(&self) -> Vec<Vec<u8>> {
        monomials(self.field, self.m, self.r)
    }

    pub fn dim(&self) -> usize {
        self.monomials().len()
    }

    /// Polynomial with the given coefficient vector over [`Self::monomials`].
    pub fn codeword(&self, coeffs: &[u8]) -> Result<Polynomial> {
        let mons = self.monomials();
        if coeffs.len() != mons.len() {
            return Err(GrmError::DimensionMismatch {
                expected: mons.len(),
                got: coeffs.len(),
            });
        }
        Ok(Polynomial::from_terms(
            self.field,
            self.m,
            mons.into_iter().zip(coeffs.iter().map(|&c| u32::from(c))),
        ))
    }
}

/// Monomials with entries in `[0, p-1]` and total degree `<= r`, graded lex.
pub fn monomials(field: FieldParams, m: usize, r: u32) -> Vec<Vec<u8>> {
    let maxe = field.p() - 1;
    let maxdeg = r.min(m as u32 * u32::from(maxe));
    let mut out = Vec::new();
    for deg in 0..=maxdeg {
        let mut cur = vec![0u8; m];
        of_degree(&mut cur, 0, deg, maxe, &mut out);
    }
    out
}

fn of_degree(cur: &mut Vec<u8>, i: usize, left: u32, maxe: u8, out: &mut Vec<Vec<u8>>) {
    if i == cur.len() {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let rest = (cur.len() - i - 1) as u32 * u32::from(maxe);
    let hi = left.min(u32::from(maxe));
    for e in (0..=hi).rev() {
        if left - e > rest {
            break;
        }
        cur[i] = e as u8;
        of_degree(cur, i + 1, left - e, maxe, out);
    }
    cur[i] = 0;
}
