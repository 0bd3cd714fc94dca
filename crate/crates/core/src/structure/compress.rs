use std::cell::RefCell;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::bias::{ThresholdTable, SCAN_OPS};
use super::regularity::RegularityCertificate;
use super::regularize::{regularize, Regularization};
use crate::budget::Budget;
use crate::distributions::{statistical_distance, Distribution};
use crate::error::{GrmError, Result};
use crate::field_poly::{tabulate, Degree, Polynomial};
use crate::ratio::{abs_diff, format_ratio};
use crate::structure::Decomposition;

/// Hard cap on the number of factors a compression may use.
const MAX_FACTORS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompressFailure {
    /// The error target was missed while the table was read below its
    /// measured range.
    ThresholdTableInsufficient,
    /// The error target was missed inside the measured range.
    ErrorTooLarge,
    /// Regularization hit the factor cap or an inconclusive rank search.
    RegularizationIncomplete,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compression {
    pub decomposition: Decomposition,
    pub certificate: RegularityCertificate,
    /// Number of inputs of `g`.
    pub c: usize,
    /// `g` on F_p^c in index order (the combiner).
    pub g: Vec<u8>,
    pub target_error: BigRational,
    /// `|rel-wt(f) - rel-wt(g)|` with `g` on uniform inputs.
    pub achieved_error: BigRational,
    /// Statistical distance between the output distributions of `f` and `g`.
    pub distribution_distance: BigRational,
    pub extrapolated: bool,
    pub failure: Option<CompressFailure>,
}

impl Compression {
    pub fn success(&self) -> bool {
        self.failure.is_none()
    }

    pub fn document(&self) -> CompressionDocument {
        CompressionDocument {
            c: self.c,
            g: self.g.clone(),
            factors: self.decomposition.factors.clone(),
            target_error: format_ratio(&self.target_error),
            achieved_error: format_ratio(&self.achieved_error),
            distribution_distance: format_ratio(&self.distribution_distance),
            threshold: self.certificate.threshold,
            threshold_source: "empirical".into(),
            extrapolated: self.extrapolated,
            success: self.success(),
            failure: self.failure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressionDocument {
    pub c: usize,
    pub g: Vec<u8>,
    pub factors: Vec<Polynomial>,
    pub target_error: String,
    pub achieved_error: String,
    pub distribution_distance: String,
    pub threshold: u64,
    pub threshold_source: String,
    pub extrapolated: bool,
    pub success: bool,
    pub failure: Option<CompressFailure>,
}

/// Compresses `f` to a function of `c` inputs with a threshold table built
/// for `(p, deg f)`.
pub fn compress(
    f: &Polynomial,
    e_map: &dyn Fn(usize) -> BigRational,
    budget: &Budget,
) -> Result<Compression> {
    let r = f.total_degree().or_zero();
    let table = ThresholdTable::build(u32::from(f.p()), r, SCAN_OPS.min(budget.max_ops))?;
    compress_with_table(f, e_map, &table, budget)
}

/// Regularizes `f` with `T(c)` read from `table` at `p^(-c) E(c)` and
/// measures how well the combiner on uniform inputs matches `f`.
pub fn compress_with_table(
    f: &Polynomial,
    e_map: &dyn Fn(usize) -> BigRational,
    table: &ThresholdTable,
    budget: &Budget,
) -> Result<Compression> {
    if !matches!(f.total_degree(), Degree::Finite(r) if r >= 1) {
        return Err(GrmError::InvalidArgument(
            "compression needs a nonconstant polynomial".into(),
        ));
    }
    let field = f.params();
    let p = BigInt::from(field.p());
    let lookups: RefCell<BTreeMap<usize, bool>> = RefCell::new(BTreeMap::new());
    let bad_target: RefCell<Option<BigRational>> = RefCell::new(None);
    let t_map = |c: usize| -> u64 {
        let e = e_map(c);
        if e <= BigRational::zero() || e >= BigRational::one() {
            bad_target.borrow_mut().get_or_insert(e.clone());
        }
        let eps = e / BigRational::from_integer(p.pow(c as u32));
        let th = table.threshold(&eps);
        lookups.borrow_mut().insert(c, th.extrapolated);
        th.t
    };
    let mut max_factors = 0;
    while max_factors < MAX_FACTORS && (field.order().pow(max_factors as u32 + 1)) <= budget.max_points {
        max_factors += 1;
    }
    let Regularization {
        decomposition,
        certificate,
        complete,
        ..
    } = regularize(f, &t_map, max_factors.max(1), budget)?;
    if let Some(e) = bad_target.into_inner() {
        return Err(GrmError::InvalidArgument(format!(
            "error target {} is outside (0, 1)",
            format_ratio(&e)
        )));
    }
    let c = decomposition.c();
    let target_error = e_map(c);
    let extrapolated = lookups.borrow().get(&c).copied().unwrap_or(false);

    let mut g_hist = vec![0u64; field.p() as usize];
    for &v in &decomposition.combiner {
        g_hist[v as usize] += 1;
    }
    let f_hist = tabulate(f, budget)?.histogram();
    let pu = u32::from(field.p());
    let df = Distribution::from_counts(pu, 1, &f_hist)?;
    let dg = Distribution::from_counts(pu, 1, &g_hist)?;
    let rel_wt = |d: &Distribution| BigRational::one() - &d.masses()[0];
    let achieved_error = abs_diff(&rel_wt(&df), &rel_wt(&dg));
    let distribution_distance = statistical_distance(&df, &dg)?;

    let failure = if !complete || !certificate.is_regular() {
        Some(CompressFailure::RegularizationIncomplete)
    } else if achieved_error >= target_error || distribution_distance >= target_error {
        Some(if extrapolated {
            CompressFailure::ThresholdTableInsufficient
        } else {
            CompressFailure::ErrorTooLarge
        })
    } else {
        None
    };
    Ok(Compression {
        g: decomposition.combiner.clone(),
        decomposition,
        certificate,
        c,
        target_error,
        achieved_error,
        distribution_distance,
        extrapolated,
        failure,
    })
}
