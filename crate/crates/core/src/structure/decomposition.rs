use serde::{Deserialize, Serialize};

use crate::budget::{checked_pow, Budget};
use crate::error::{GrmError, Result};
use crate::field_poly::{tabulate, EvaluationTable, Polynomial};

/// A certificate `f = F(g_1, ..., g_c)`. `combiner[i]` is `F` at the point of
/// F_p^c with index `i`; points off the image of `(g_1, ..., g_c)` map to 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub factors: Vec<Polynomial>,
    pub combiner: Vec<u8>,
    pub factor_degree_bound: u32,
}

/// Index of `(g_1(x), ..., g_c(x))` in F_p^c for every point `x`.
pub(crate) fn image_keys(tables: &[EvaluationTable], len: usize, p: u8) -> Vec<usize> {
    let p = p as usize;
    let mut keys = vec![0usize; len];
    for t in tables.iter().rev() {
        for (x, k) in keys.iter_mut().enumerate() {
            *k = *k * p + t.get(x) as usize;
        }
    }
    keys
}

/// `F` with `F(k) = f(x)` whenever `k` is the key of `x`, or `None` when two
/// points share a key but not a value of `f`.
pub(crate) fn combiner_from_keys(fvals: &EvaluationTable, keys: &[usize], size: usize) -> Option<Vec<u8>> {
    // 0xff marks a slot not yet seen.
    let mut slots = vec![u8::MAX; size];
    for (x, &k) in keys.iter().enumerate() {
        let v = fvals.get(x);
        match slots[k] {
            u8::MAX => slots[k] = v,
            s if s != v => return None,
            _ => {}
        }
    }
    for s in slots.iter_mut() {
        if *s == u8::MAX {
            *s = 0;
        }
    }
    Some(slots)
}

impl Decomposition {
    pub fn c(&self) -> usize {
        self.factors.len()
    }

    /// Builds the combiner for `factors`, or `None` when `f` is not a
    /// function of them.
    pub fn derive(
        f: &Polynomial,
        factors: Vec<Polynomial>,
        factor_degree_bound: u32,
        budget: &Budget,
    ) -> Result<Option<Decomposition>> {
        let field = f.params();
        if let Some(g) = factors.iter().find(|g| g.params() != field || g.m() != f.m()) {
            return Err(GrmError::ParamsMismatch(format!(
                "factor over (p, m) = ({}, {}), polynomial over ({}, {})",
                g.p(),
                g.m(),
                f.p(),
                f.m()
            )));
        }
        let size = budget.check_points("combiner table", checked_pow(field.order(), factors.len()))?;
        let fvals = tabulate(f, budget)?;
        let tables = factors
            .iter()
            .map(|g| tabulate(g, budget))
            .collect::<Result<Vec<_>>>()?;
        let keys = image_keys(&tables, fvals.len(), field.p());
        Ok(
            combiner_from_keys(&fvals, &keys, size as usize).map(|combiner| Decomposition {
                factors,
                combiner,
                factor_degree_bound,
            }),
        )
    }

    /// Checks the degree bound on every factor and `F(g(x)) = f(x)` at every
    /// point.
    pub fn verify(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        let field = f.params();
        let size = checked_pow(field.order(), self.c());
        if size != Some(self.combiner.len() as u64) {
            return Ok(false);
        }
        if self
            .factors
            .iter()
            .any(|g| g.params() != field || g.m() != f.m() || !g.total_degree().at_most(self.factor_degree_bound))
        {
            return Ok(false);
        }
        let fvals = tabulate(f, budget)?;
        let tables = self
            .factors
            .iter()
            .map(|g| tabulate(g, budget))
            .collect::<Result<Vec<_>>>()?;
        let keys = image_keys(&tables, fvals.len(), field.p());
        Ok(keys
            .iter()
            .enumerate()
            .all(|(x, &k)| self.combiner[k] == fvals.get(x)))
    }
}
