//! Arithmetic on F_p and on reduced multivariate polynomials: parsing,
//! evaluation, tabulation and affine substitution.

mod affine;
mod field;
pub mod linalg;
mod parse;
mod polynomial;
mod table;

pub use affine::{apply_affine, AffineMap};
pub use field::{index_point, point_index, FieldParams, SUPPORTED_PRIMES};
pub use parse::parse_polynomial;
pub use polynomial::{Degree, Polynomial};
pub use table::{monomial_table, monomial_values, tabulate, EvaluationTable};

use crate::error::Result;

/// Evaluates `f` at `x`; `x` must have `m` coordinates in `[0, p)`.
pub fn evaluate(f: &Polynomial, x: &[u8]) -> Result<u8> {
    f.evaluate(x)
}

pub fn total_degree(f: &Polynomial) -> Degree {
    f.total_degree()
}
