use serde::{Deserialize, Serialize};

use super::decomposition::Decomposition;
use super::rank::{rank, RankStatus, RankValue};
use crate::budget::{checked_pow, Budget};
use crate::error::{GrmError, Result};
use crate::field_poly::{index_point, Degree, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Violation,
    Inconclusive,
}

/// One nonzero combination `f' = sum a_i g_i` with the rank test applied to
/// it: `rank_{k-1}(f') > T` where `k = deg f'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationRecord {
    pub coefficients: Vec<u8>,
    /// `None` for the zero polynomial.
    pub degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank_status: Option<RankStatus>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank: Option<RankValue>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank_lower_bound: Option<RankValue>,
    pub outcome: Outcome,
    #[serde(skip)]
    pub combination: Option<Polynomial>,
    /// Low-rank witness for a violating combination of degree >= 2.
    #[serde(skip)]
    pub witness: Option<Decomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Regular,
    /// The first violating coefficient vector in index order.
    Violation { coefficients: Vec<u8> },
    /// No violation found but some rank search ran out of budget.
    Unconfirmed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    pub threshold: u64,
    pub records: Vec<CombinationRecord>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl RegularityCertificate {
    pub fn is_regular(&self) -> bool {
        self.verdict == Verdict::Regular
    }

    pub fn first_violation(&self) -> Option<&CombinationRecord> {
        self.records.iter().find(|r| r.outcome == Outcome::Violation)
    }
}

/// Checks every nonzero combination of `gs` (coefficient vectors in index
/// order, first coordinate least significant). Zero and nonzero constant
/// combinations are violations; nonconstant linear ones pass since their
/// degree-0 rank is infinite.
pub fn is_regular_set(gs: &[Polynomial], threshold: u64, budget: &Budget) -> Result<RegularityCertificate> {
    let first = gs
        .first()
        .ok_or_else(|| GrmError::InvalidArgument("empty polynomial set".into()))?;
    let (field, m) = (first.params(), first.m());
    if let Some(g) = gs.iter().find(|g| g.params() != field || g.m() != m) {
        return Err(GrmError::ParamsMismatch(format!(
            "(p, m) = ({}, {}) vs ({}, {})",
            field.p(),
            m,
            g.p(),
            g.m()
        )));
    }
    let combos = budget.check_points("combinations", checked_pow(field.order(), gs.len()))?;
    let mut records = Vec::with_capacity(combos as usize - 1);
    for idx in 1..combos as usize {
        let a = index_point(field.p(), gs.len(), idx);
        let mut fp = Polynomial::zero(field, m);
        for (g, &ai) in gs.iter().zip(&a) {
            fp.add_scaled(g, ai);
        }
        let mut rec = CombinationRecord {
            coefficients: a,
            degree: fp.total_degree().value(),
            rank_status: None,
            rank: None,
            rank_lower_bound: None,
            outcome: Outcome::Violation,
            combination: None,
            witness: None,
        };
        if let Degree::Finite(k) = fp.total_degree() {
            if k >= 1 {
                let r = rank(&fp, k - 1, budget)?;
                rec.outcome = match r.status {
                    RankStatus::Exact if r.value.exceeds(threshold) => Outcome::Pass,
                    RankStatus::Exact => Outcome::Violation,
                    _ if r.lower_bound.exceeds(threshold) => Outcome::Pass,
                    RankStatus::SearchExhausted if !r.value.exceeds(threshold) => Outcome::Violation,
                    _ => Outcome::Inconclusive,
                };
                rec.rank_status = Some(r.status);
                rec.rank = Some(r.value);
                rec.rank_lower_bound = Some(r.lower_bound);
                if rec.outcome == Outcome::Violation {
                    rec.witness = r.witness;
                }
            }
        }
        rec.combination = Some(fp);
        records.push(rec);
    }
    let verdict = if let Some(v) = records.iter().find(|r| r.outcome == Outcome::Violation) {
        Verdict::Violation {
            coefficients: v.coefficients.clone(),
        }
    } else if records.iter().any(|r| r.outcome == Outcome::Inconclusive) {
        Verdict::Unconfirmed
    } else {
        Verdict::Regular
    };
    Ok(RegularityCertificate {
        threshold,
        records,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::parse_polynomial;

    fn polys(texts: &[&str], p: u32, m: usize) -> Vec<Polynomial> {
        texts.iter().map(|t| parse_polynomial(t, p, m).unwrap()).collect()
    }

    #[test]
    fn regularity_examples() {
        let b = Budget::default();
        let c = is_regular_set(&polys(&["x1", "x1 + x2"], 2, 2), 10, &b).unwrap();
        assert_eq!(c.verdict, Verdict::Regular);
        assert_eq!(c.records.len(), 3);

        let c = is_regular_set(&polys(&["x1*x2", "x3"], 2, 3), 1, &b).unwrap();
        assert_eq!(c.verdict, Verdict::Regular);
        let ranks: Vec<_> = c.records.iter().map(|r| r.rank).collect();
        assert_eq!(
            ranks,
            vec![
                Some(RankValue::Finite(2)),
                Some(RankValue::Infinite),
                Some(RankValue::Finite(3))
            ]
        );

        let c = is_regular_set(&polys(&["x1*x2", "x1*x2 + 1"], 2, 2), 0, &b).unwrap();
        assert_eq!(
            c.verdict,
            Verdict::Violation {
                coefficients: vec![1, 1]
            }
        );
    }

    #[test]
    fn low_rank_combination_violates() {
        let b = Budget::default();
        let c = is_regular_set(&polys(&["x1*x2 + x3*x4"], 2, 4), 4, &b).unwrap();
        assert!(!c.is_regular());
        assert!(c.first_violation().unwrap().witness.is_some());
    }
}
