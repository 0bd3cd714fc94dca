use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rank::{gaussian_binomial, rank, RankStatus, RankValue};
use crate::budget::{checked_pow, Budget};
use crate::error::{GrmError, Result};
use crate::field_poly::{index_point, tabulate, FieldParams, Polynomial};
use crate::ratio::format_ratio;
use crate::spectrum::monomials;

/// Largest `m` considered when sizing a threshold-table scan.
const MAX_SCAN_M: usize = 8;

/// Default step cap for the scans behind a [`ThresholdTable`].
pub const SCAN_OPS: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasRow {
    pub distance: BigRational,
    pub rank: RankValue,
    pub count: u64,
}

/// Distance to uniform against `rank_{r-1}` for every polynomial of degree
/// exactly `r` in `m` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasScan {
    pub p: u8,
    pub r: u32,
    pub m: usize,
    /// Sorted by distance, then rank.
    pub rows: Vec<BiasRow>,
    /// `(eps, max rank over polynomials at distance >= eps)` for every
    /// observed distance, ascending in `eps`.
    pub max_rank: Vec<(BigRational, RankValue)>,
}

impl BiasScan {
    /// Largest rank among polynomials at distance `>= eps`; `None` when there
    /// are none.
    pub fn max_rank_at(&self, eps: &BigRational) -> Option<RankValue> {
        self.max_rank.iter().find(|(e, _)| e >= eps).map(|&(_, r)| r)
    }

    pub fn min_positive_distance(&self) -> Option<&BigRational> {
        self.rows.iter().map(|r| &r.distance).find(|d| !d.is_zero())
    }

    pub fn document(&self) -> BiasScanDocument {
        BiasScanDocument {
            p: u32::from(self.p),
            r: self.r,
            m: self.m,
            rows: self
                .rows
                .iter()
                .map(|row| BiasRowDocument {
                    distance: format_ratio(&row.distance),
                    rank: row.rank,
                    count: row.count,
                })
                .collect(),
            max_rank: self
                .max_rank
                .iter()
                .map(|(e, r)| MaxRankDocument {
                    epsilon: format_ratio(e),
                    rank: *r,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiasRowDocument {
    pub distance: String,
    pub rank: RankValue,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxRankDocument {
    pub epsilon: String,
    pub rank: RankValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiasScanDocument {
    pub p: u32,
    pub r: u32,
    pub m: usize,
    pub rows: Vec<BiasRowDocument>,
    pub max_rank: Vec<MaxRankDocument>,
}

/// `1/2 * sum_a |hist[a] / N - 1/p|`.
pub(crate) fn distance_to_uniform(hist: &[u64]) -> BigRational {
    let n: u64 = hist.iter().sum();
    let p = hist.len() as u64;
    // Over the common denominator 2 p N.
    let num: BigInt = hist
        .iter()
        .map(|&h| (BigInt::from(h) * p - n).abs())
        .sum();
    BigRational::new(num, BigInt::from(2 * p * n))
}

/// Estimated steps for [`bias_rank_scan`].
fn scan_cost(field: FieldParams, r: u32, m: usize) -> Option<u64> {
    let dim = monomials(field, m, r).len();
    let polys = checked_pow(field.order(), dim)?;
    let points = checked_pow(field.order(), m)?;
    let mut per = points.checked_mul(points)?;
    if r >= 3 {
        let n = monomials(field, m, r - 1).len() - 1;
        for c in 1..m {
            let level = (gaussian_binomial(field.order(), n, c) * points * (c as u64 + 1)).to_u64()?;
            per = per.checked_add(level)?;
        }
    }
    polys.checked_mul(per)
}

pub fn bias_rank_scan(p: u32, r: u32, m: usize, budget: &Budget) -> Result<BiasScan> {
    let field = FieldParams::new(p)?;
    if r == 0 {
        return Err(GrmError::InvalidOrder("bias scan needs r >= 1".into()));
    }
    budget.check_points("evaluation table", checked_pow(field.order(), m))?;
    budget.check_ops("bias scan", scan_cost(field, r, m))?;
    let mons = monomials(field, m, r);
    let top: Vec<usize> = (0..mons.len())
        .filter(|&i| mons[i].iter().map(|&e| u32::from(e)).sum::<u32>() == r)
        .collect();
    if top.is_empty() {
        return Err(GrmError::InvalidOrder(format!(
            "no polynomial of degree {r} in {m} variables over F_{p}"
        )));
    }
    let total = field.order().pow(mons.len() as u32);
    type Counts = BTreeMap<(BigRational, RankValue), u64>;
    let rank_budget = Budget::default();
    let counts: Counts = (0..total)
        .into_par_iter()
        .try_fold(Counts::new, |mut acc, idx| -> Result<Counts> {
            let coeffs = index_point(field.p(), mons.len(), idx as usize);
            if top.iter().all(|&i| coeffs[i] == 0) {
                return Ok(acc);
            }
            let f = Polynomial::from_terms(
                field,
                m,
                mons.iter().cloned().zip(coeffs.iter().map(|&c| u32::from(c))),
            );
            let dist = distance_to_uniform(&tabulate(&f, &rank_budget)?.histogram());
            let rk = rank(&f, r - 1, &rank_budget)?;
            if rk.status != RankStatus::Exact {
                return Err(GrmError::BudgetExceeded {
                    what: "rank inside bias scan".into(),
                    required: format!("more than {}", rank_budget.max_ops),
                    limit: rank_budget.max_ops,
                });
            }
            *acc.entry((dist, rk.value)).or_default() += 1;
            Ok(acc)
        })
        .try_reduce(Counts::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            Ok(a)
        })?;
    let rows: Vec<BiasRow> = counts
        .into_iter()
        .map(|((distance, rank), count)| BiasRow {
            distance,
            rank,
            count,
        })
        .collect();
    let mut max_rank: Vec<(BigRational, RankValue)> = Vec::new();
    let mut running: Option<RankValue> = None;
    for row in rows.iter().rev() {
        running = Some(running.map_or(row.rank, |r| r.max(row.rank)));
        match max_rank.last_mut() {
            Some((e, r)) if *e == row.distance => *r = running.unwrap(),
            _ => max_rank.push((row.distance.clone(), running.unwrap())),
        }
    }
    max_rank.reverse();
    Ok(BiasScan {
        p: field.p(),
        r,
        m,
        rows,
        max_rank,
    })
}

/// Result of looking up a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    pub t: u64,
    /// `eps` lies below every positive distance some scan observed, so the
    /// table is being read outside its measured range.
    pub extrapolated: bool,
}

/// Empirical stand-in for the bias-to-rank bound: for each degree `k` in
/// `2..=r`, the scan at the largest affordable `m`. A lookup returns one more
/// than the largest rank observed at distance `>= eps` over all degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdTable {
    pub p: u8,
    pub scans: Vec<BiasScan>,
}

impl ThresholdTable {
    pub fn build(p: u32, r: u32, scan_ops: u64) -> Result<Self> {
        let field = FieldParams::new(p)?;
        let budget = Budget::with_ops(scan_ops);
        let mut scans = Vec::new();
        for k in 2..=r {
            let min_m = (k as usize).div_ceil(field.p() as usize - 1);
            let m = (min_m..=MAX_SCAN_M.max(min_m))
                .take_while(|&m| scan_cost(field, k, m).is_some_and(|c| c <= scan_ops))
                .last();
            if let Some(m) = m {
                scans.push(bias_rank_scan(p, k, m, &budget)?);
            }
        }
        Ok(ThresholdTable {
            p: field.p(),
            scans,
        })
    }

    pub fn threshold(&self, eps: &BigRational) -> Threshold {
        let mut t = 0u64;
        let mut extrapolated = false;
        for s in &self.scans {
            match s.max_rank_at(eps) {
                Some(RankValue::Finite(c)) => t = t.max(u64::from(c)),
                Some(RankValue::Infinite) => t = u64::MAX,
                None => {}
            }
            if s.min_positive_distance().is_none_or(|d| eps < d) {
                extrapolated = true;
            }
        }
        Threshold {
            t: t.saturating_add(1),
            extrapolated,
        }
    }
}
