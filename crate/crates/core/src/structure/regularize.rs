use serde::{Deserialize, Serialize};

use super::decomposition::Decomposition;
use super::regularity::{is_regular_set, RegularityCertificate, Verdict};
use crate::budget::Budget;
use crate::error::{GrmError, Result};
use crate::field_poly::{Degree, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularization {
    pub decomposition: Decomposition,
    pub certificate: RegularityCertificate,
    /// Number of refinement steps taken.
    pub steps: usize,
    /// `false` when the factor cap stopped refinement early; the certificate
    /// then records the unresolved violation.
    pub complete: bool,
}

/// Refines `{f}` until the factor set is `t_map(c)`-regular. Each step takes
/// the first violating combination `f' = sum a_i g_i`, picks the factor
/// `g_j` of highest degree with `a_j != 0` (lowest index on ties) and
/// replaces it by the low-rank witness factors of `f'`, or drops it when `f'`
/// is constant. The combiner is re-derived from the new factors each time.
pub fn regularize(
    f: &Polynomial,
    t_map: &dyn Fn(usize) -> u64,
    max_factors: usize,
    budget: &Budget,
) -> Result<Regularization> {
    let r = match f.total_degree() {
        Degree::Finite(r) if r >= 1 => r,
        _ => {
            return Err(GrmError::InvalidArgument(
                "regularization needs a nonconstant polynomial".into(),
            ))
        }
    };
    let mut gs = vec![f.clone()];
    let mut steps = 0;
    loop {
        let certificate = is_regular_set(&gs, t_map(gs.len()), budget)?;
        let violation = match &certificate.verdict {
            Verdict::Violation { .. } => certificate.first_violation().cloned(),
            _ => None,
        };
        let finish = |gs: Vec<Polynomial>, certificate, complete| -> Result<Regularization> {
            let decomposition = Decomposition::derive(f, gs, r, budget)?
                .ok_or_else(|| GrmError::Internal("factors no longer determine f".into()))?;
            Ok(Regularization {
                decomposition,
                certificate,
                steps,
                complete,
            })
        };
        let Some(v) = violation else {
            return finish(gs, certificate, true);
        };
        let j = (0..gs.len())
            .filter(|&i| v.coefficients[i] != 0)
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if gs[b].total_degree() >= gs[i].total_degree() => Some(b),
                _ => Some(i),
            })
            .expect("violating combination is nonzero");
        let replacement = match v.witness {
            Some(w) => w.factors,
            None => Vec::new(),
        };
        if gs.len() - 1 + replacement.len() > max_factors {
            return finish(gs, certificate, false);
        }
        gs.splice(j..=j, replacement);
        steps += 1;
    }
}
