//! Density analysis: p-rationality, the distance `delta(c)` from a target to
//! the grid `l / p^c`, empirical gap scans over weight sets, Ax divisibility
//! and minimum weights.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{GrmError, Result};
use crate::ratio::{abs_diff, format_ratio, in_unit_interval, parse_ratio};
use crate::spectrum::{
    enumerate_spectrum, weight_set, CodeParams, EnumerationMode, PExactRational, WeightSpectrum,
};

/// An exact target `a/b` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetValue(BigRational);

impl TargetValue {
    pub fn new(q: BigRational) -> Result<Self> {
        if !in_unit_interval(&q) {
            return Err(GrmError::InvalidTarget(format!(
                "{} is outside [0, 1]",
                format_ratio(&q)
            )));
        }
        Ok(TargetValue(q))
    }

    /// Parses `a/b` or an integer; decimal input is rejected because
    /// p-rationality cannot be read off a float.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_ratio(text)?)
    }

    pub fn from_fraction(a: i64, b: i64) -> Result<Self> {
        if b == 0 {
            return Err(GrmError::InvalidRational(format!("{a}/{b}")));
        }
        Self::new(BigRational::new(a.into(), b.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for TargetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_ratio(&self.0))
    }
}

/// `Some(l / p^k)` in canonical form when the reduced denominator of `q` is a
/// power of `p`.
pub fn is_p_rational(q: &TargetValue, p: u8) -> Option<PExactRational> {
    PExactRational::from_ratio(p, &q.0)
}

/// Distance from `alpha` to the nearest rational `l / p^c`:
/// `min(alpha - floor(alpha p^c)/p^c, ceil(alpha p^c)/p^c - alpha)`.
pub fn delta(alpha: &TargetValue, c: u32, p: u8) -> Result<BigRational> {
    if c == 0 {
        return Err(GrmError::InvalidArgument("delta needs c >= 1".into()));
    }
    let scale = BigInt::from(p).pow(c);
    let scaled = alpha.0.clone() * BigRational::from_integer(scale.clone());
    let lo = BigRational::new(scaled.floor().to_integer(), scale.clone());
    let hi = BigRational::new(scaled.ceil().to_integer(), scale);
    let below = &alpha.0 - lo;
    let above = hi - &alpha.0;
    Ok(below.min(above))
}

/// Nearest weight to the target at one `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRecord {
    pub m: usize,
    pub nearest: PExactRational,
    pub distance: BigRational,
    pub mode: EnumerationMode,
}

/// Empirical gap around `alpha` over `m = 1..=max_m`. Nothing is claimed
/// for larger `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub alpha: TargetValue,
    pub p: u8,
    pub r: u32,
    pub per_m: Vec<GapRecord>,
    /// `false` when the scan stopped early; `stopped` says why.
    pub complete: bool,
    pub stopped: Option<String>,
}

impl GapReport {
    pub fn overall_gap(&self) -> Option<BigRational> {
        self.per_m.iter().map(|r| r.distance.clone()).min()
    }

    pub fn attained(&self) -> bool {
        self.per_m.iter().any(|r| r.distance.is_zero())
    }

    /// The record at which the overall minimum is first reached.
    pub fn best(&self) -> Option<&GapRecord> {
        let gap = self.overall_gap()?;
        self.per_m.iter().find(|r| r.distance == gap)
    }

    pub fn document(&self) -> GapDocument {
        GapDocument {
            alpha: self.alpha.to_string(),
            p: u32::from(self.p),
            r: self.r,
            per_m: self
                .per_m
                .iter()
                .map(|rec| GapRecordDocument {
                    m: rec.m,
                    nearest: rec.nearest.to_string(),
                    distance: format_ratio(&rec.distance),
                    mode: rec.mode,
                })
                .collect(),
            overall_gap: self.overall_gap().map(|g| format_ratio(&g)),
            attained: self.attained(),
            complete: self.complete,
            stopped: self.stopped.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRecordDocument {
    pub m: usize,
    pub nearest: String,
    pub distance: String,
    pub mode: EnumerationMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapDocument {
    pub alpha: String,
    pub p: u32,
    pub r: u32,
    pub per_m: Vec<GapRecordDocument>,
    pub overall_gap: Option<String>,
    pub attained: bool,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stopped: Option<String>,
}

/// Nearest member of the weight set; ties go to the smaller weight.
pub fn nearest_weight(
    alpha: &TargetValue,
    spectrum: &WeightSpectrum,
) -> Option<(PExactRational, BigRational)> {
    let mut best: Option<(PExactRational, BigRational)> = None;
    for w in weight_set(spectrum) {
        let d = abs_diff(&w.to_ratio(), &alpha.0);
        if best.as_ref().is_none_or(|(_, bd)| &d < bd) {
            best = Some((w, d));
        }
    }
    best
}

/// Gap scan with a caller-provided spectrum source (e.g. a cache).
pub fn gap_scan_with<F>(alpha: &TargetValue, p: u32, r: u32, max_m: usize, mut source: F) -> Result<GapReport>
where
    F: FnMut(CodeParams) -> Result<WeightSpectrum>,
{
    let probe = CodeParams::new(p, r, 0)?;
    let mut report = GapReport {
        alpha: alpha.clone(),
        p: probe.p(),
        r,
        per_m: Vec::new(),
        complete: true,
        stopped: None,
    };
    for m in 1..=max_m {
        let params = CodeParams { m, ..probe };
        let spectrum = match source(params) {
            Ok(s) => s,
            Err(e @ GrmError::BudgetExceeded { .. }) => {
                report.complete = false;
                report.stopped = Some(format!("m = {m}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let (nearest, distance) = nearest_weight(alpha, &spectrum)
            .ok_or_else(|| GrmError::Internal("empty weight set".into()))?;
        report.per_m.push(GapRecord {
            m,
            nearest,
            distance,
            mode: spectrum.mode,
        });
    }
    Ok(report)
}

pub fn gap_scan(
    alpha: &TargetValue,
    p: u32,
    r: u32,
    max_m: usize,
    budget: &Budget,
    workers: usize,
) -> Result<GapReport> {
    gap_scan_with(alpha, p, r, max_m, |params| {
        enumerate_spectrum(params, budget, workers)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxReport {
    pub ok: bool,
    pub divisor: BigUint,
    pub violations: Vec<u64>,
}

/// Checks every attained weight against Ax's divisor `p^(ceil(m/r) - 1)`
/// (taken as 1 when `m = 0`).
pub fn ax_check(spectrum: &WeightSpectrum) -> Result<AxReport> {
    let CodeParams { m, r, .. } = spectrum.params;
    if r == 0 {
        return Err(GrmError::InvalidOrder("Ax divisibility needs r >= 1".into()));
    }
    let exp = (m as u32).div_ceil(r).saturating_sub(1);
    let divisor = BigUint::from(spectrum.params.p()).pow(exp);
    let violations: Vec<u64> = spectrum
        .weights()
        .filter(|&w| !BigUint::from(w).is_multiple_of(&divisor))
        .collect();
    Ok(AxReport {
        ok: violations.is_empty(),
        divisor,
        violations,
    })
}

/// Like [`ax_check`] but a violation is an error: Ax's bound always holds,
/// so one can only come from a bug.
pub fn require_ax(spectrum: &WeightSpectrum) -> Result<AxReport> {
    let report = ax_check(spectrum)?;
    if !report.ok {
        return Err(GrmError::Internal(format!(
            "Ax divisibility violated by weights {:?} (divisor {})",
            report.violations, report.divisor
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinWeightMode {
    Formula,
    Enumerate,
}

/// Minimum weight of a nonzero codeword of `RM_p(r, m)`, `r >= 1`.
///
/// The formula writes `r = a(p - 1) + b` with `0 <= b < p - 1` and gives
/// `(p - b) p^(m - a - 1)`; it is the classical result for these codes and is
/// cross-checked against enumeration in the tests.
pub fn min_weight(
    params: CodeParams,
    mode: MinWeightMode,
    budget: &Budget,
    workers: usize,
) -> Result<u64> {
    let CodeParams { r, m, .. } = params;
    if r == 0 {
        return Err(GrmError::InvalidOrder("minimum weight needs r >= 1".into()));
    }
    match mode {
        MinWeightMode::Formula => {
            let p = u64::from(params.p());
            let q = p - 1;
            if u64::from(r) >= m as u64 * q {
                return Ok(1);
            }
            let (a, b) = u64::from(r).div_rem(&q);
            let exp = m as u64 - a - 1;
            let pow = p
                .checked_pow(exp as u32)
                .ok_or_else(|| GrmError::InvalidArgument("minimum weight overflows u64".into()))?;
            Ok((p - b) * pow)
        }
        MinWeightMode::Enumerate => {
            let s = enumerate_spectrum(params, budget, workers)?;
            s.min_nonzero_weight()
                .ok_or_else(|| GrmError::Internal("code has no nonzero codeword".into()))
        }
    }
}
