//! Exact output distributions of polynomial tuples, statistical distance and
//! the search for the low-degree polynomial whose distribution is closest to
//! a target.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::budget::{checked_pow, Budget};
use crate::error::{GrmError, Result};
use crate::field_poly::{index_point, monomial_table, tabulate, FieldParams, Polynomial};
use crate::ratio::{format_ratio, in_unit_interval, parse_ratio};
use crate::spectrum::CodeParams;

/// A distribution on F_p^c; `masses[i]` is the probability of the point with
/// index `i` (first coordinate least significant).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DistributionDocument", into = "DistributionDocument")]
pub struct Distribution {
    p: u8,
    c: usize,
    masses: Vec<BigRational>,
}

impl Distribution {
    pub fn new(p: u32, c: usize, masses: Vec<BigRational>) -> Result<Self> {
        let field = FieldParams::new(p)?;
        let size = checked_pow(field.order(), c)
            .ok_or_else(|| GrmError::InvalidArgument("alphabet too large".into()))?;
        if masses.len() as u64 != size {
            return Err(GrmError::DimensionMismatch {
                expected: size as usize,
                got: masses.len(),
            });
        }
        if let Some(bad) = masses.iter().find(|q| !in_unit_interval(q)) {
            return Err(GrmError::InvalidArgument(format!(
                "mass {} outside [0, 1]",
                format_ratio(bad)
            )));
        }
        let total: BigRational = masses.iter().sum();
        if !total.is_one() {
            return Err(GrmError::InvalidArgument(format!(
                "masses sum to {}, not 1",
                format_ratio(&total)
            )));
        }
        Ok(Distribution {
            p: field.p(),
            c,
            masses,
        })
    }

    /// `counts[i] / total`.
    pub fn from_counts(p: u32, c: usize, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(GrmError::InvalidArgument("empty count vector".into()));
        }
        let masses = counts
            .iter()
            .map(|&k| BigRational::new(BigInt::from(k), BigInt::from(total)))
            .collect();
        Self::new(p, c, masses)
    }

    pub fn uniform(p: u32, c: usize) -> Result<Self> {
        let field = FieldParams::new(p)?;
        let size = checked_pow(field.order(), c)
            .ok_or_else(|| GrmError::InvalidArgument("alphabet too large".into()))?;
        Self::from_counts(p, c, &vec![1; size as usize])
    }

    pub fn point_mass(p: u32, c: usize, at: usize) -> Result<Self> {
        let field = FieldParams::new(p)?;
        let size = checked_pow(field.order(), c)
            .ok_or_else(|| GrmError::InvalidArgument("alphabet too large".into()))? as usize;
        if at >= size {
            return Err(GrmError::InvalidArgument(format!(
                "point {at} outside an alphabet of {size}"
            )));
        }
        let mut counts = vec![0; size];
        counts[at] = 1;
        Self::from_counts(p, c, &counts)
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    pub fn alphabet_size(&self) -> usize {
        self.masses.len()
    }

    fn check_same_alphabet(&self, other: &Distribution) -> Result<()> {
        if self.p != other.p || self.c != other.c {
            return Err(GrmError::AlphabetMismatch(
                self.alphabet_size(),
                other.alphabet_size(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionDocument {
    pub p: u32,
    pub c: usize,
    pub masses: Vec<String>,
}

impl From<Distribution> for DistributionDocument {
    fn from(d: Distribution) -> Self {
        DistributionDocument {
            p: u32::from(d.p),
            c: d.c,
            masses: d.masses.iter().map(format_ratio).collect(),
        }
    }
}

impl TryFrom<DistributionDocument> for Distribution {
    type Error = GrmError;
    fn try_from(doc: DistributionDocument) -> Result<Self> {
        let masses = doc
            .masses
            .iter()
            .map(|s| parse_ratio(s))
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(doc.p, doc.c, masses)
    }
}

/// Joint value counts of `fs` over all points of F_p^m, in index order.
pub fn joint_counts(fs: &[Polynomial], budget: &Budget) -> Result<Vec<u64>> {
    let first = fs
        .first()
        .ok_or_else(|| GrmError::InvalidArgument("need at least one polynomial".into()))?;
    let (field, m) = (first.params(), first.m());
    if let Some(g) = fs.iter().find(|g| g.params() != field || g.m() != m) {
        return Err(GrmError::ParamsMismatch(format!(
            "(p, m) = ({}, {}) vs ({}, {})",
            field.p(),
            m,
            g.p(),
            g.m()
        )));
    }
    let size = budget.check_points("joint alphabet", checked_pow(field.order(), fs.len()))?;
    let tables = fs
        .iter()
        .map(|g| tabulate(g, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![0u64; size as usize];
    let p = field.p() as usize;
    for x in 0..tables[0].len() {
        let key = tables.iter().rev().fold(0usize, |k, t| k * p + t.get(x) as usize);
        counts[key] += 1;
    }
    Ok(counts)
}

/// Exact joint distribution of `(f_1(x), ..., f_c(x))` for uniform `x`.
pub fn distribution_of(fs: &[Polynomial], budget: &Budget) -> Result<Distribution> {
    let counts = joint_counts(fs, budget)?;
    Distribution::from_counts(u32::from(fs[0].p()), fs.len(), &counts)
}

/// `1/2 * sum_s |D1(s) - D2(s)|`.
pub fn statistical_distance(d1: &Distribution, d2: &Distribution) -> Result<BigRational> {
    d1.check_same_alphabet(d2)?;
    let sum: BigRational = d1
        .masses
        .iter()
        .zip(&d2.masses)
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(sum / BigRational::from_integer(2.into()))
}

/// `|D1(S) - D2(S)|` together with the check that it does not exceed the
/// statistical distance.
pub fn distinguisher_gap(
    d1: &Distribution,
    d2: &Distribution,
    subset: &[usize],
) -> Result<(BigRational, bool)> {
    d1.check_same_alphabet(d2)?;
    let mut members = subset.to_vec();
    members.sort_unstable();
    members.dedup();
    if let Some(&s) = members.iter().find(|&&s| s >= d1.alphabet_size()) {
        return Err(GrmError::InvalidArgument(format!(
            "subset element {s} outside an alphabet of {}",
            d1.alphabet_size()
        )));
    }
    let mass = |d: &Distribution| -> BigRational { members.iter().map(|&s| &d.masses[s]).sum() };
    let gap = (mass(d1) - mass(d2)).abs();
    let ok = gap <= statistical_distance(d1, d2)?;
    Ok((gap, ok))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComboUniformity {
    /// Distance from uniform on F_p of `sum a_i g_i`, for every nonzero `a`
    /// in index order.
    pub per_combination: Vec<(Vec<u8>, BigRational)>,
    pub joint: BigRational,
    /// Every combination was below `p^(-c) * epsilon`.
    pub hypothesis: bool,
    /// The hypothesis implies `joint < epsilon` here.
    pub factor_ok: bool,
}

/// Checks that near-uniform nonzero combinations give a near-uniform joint
/// distribution.
pub fn combo_uniformity_check(
    gs: &[Polynomial],
    epsilon: &BigRational,
    budget: &Budget,
) -> Result<ComboUniformity> {
    let joint_counts = joint_counts(gs, budget)?;
    let field = gs[0].params();
    let c = gs.len();
    let p = u32::from(field.p());
    let joint = Distribution::from_counts(p, c, &joint_counts)?;
    let joint_distance = statistical_distance(&joint, &Distribution::uniform(p, c)?)?;
    let uniform1 = Distribution::uniform(p, 1)?;
    let mut per_combination = Vec::with_capacity(joint_counts.len() - 1);
    for idx in 1..joint_counts.len() {
        let a = index_point(field.p(), c, idx);
        // Push the joint distribution forward along y -> a . y instead of
        // tabulating the combination again.
        let mut counts = vec![0u64; field.p() as usize];
        for (y, &k) in joint_counts.iter().enumerate() {
            let pt = index_point(field.p(), c, y);
            let v = pt
                .iter()
                .zip(&a)
                .fold(0u8, |acc, (&yi, &ai)| field.add(acc, field.mul(yi, ai)));
            counts[v as usize] += k;
        }
        let d = Distribution::from_counts(p, 1, &counts)?;
        per_combination.push((a, statistical_distance(&d, &uniform1)?));
    }
    let bound = epsilon / BigRational::from_integer(BigInt::from(p).pow(c as u32));
    let hypothesis = per_combination.iter().all(|(_, d)| d < &bound);
    let factor_ok = !hypothesis || &joint_distance < epsilon;
    Ok(ComboUniformity {
        per_combination,
        joint: joint_distance,
        hypothesis,
        factor_ok,
    })
}

/// Best distance found for one `(r, m)` cell of the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxCell {
    pub r: u32,
    pub m: usize,
    pub distance: BigRational,
    pub witness: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationResult {
    pub target: Distribution,
    /// Cells in search order: `r` ascending, then `m` ascending.
    pub cells: Vec<ApproxCell>,
    pub complete: bool,
    pub stopped: Option<String>,
}

impl ApproximationResult {
    /// Best cell overall; ties go to the earliest cell.
    pub fn best(&self) -> Option<&ApproxCell> {
        self.best_within(u32::MAX, usize::MAX)
    }

    /// Best cell with `r <= r_max` and `m <= m_max`.
    pub fn best_within(&self, r_max: u32, m_max: usize) -> Option<&ApproxCell> {
        self.cells
            .iter()
            .filter(|c| c.r <= r_max && c.m <= m_max)
            .fold(None, |best: Option<&ApproxCell>, c| match best {
                Some(b) if b.distance <= c.distance => Some(b),
                _ => Some(c),
            })
    }

    /// Best distance per degree over every searched `m`.
    pub fn per_degree(&self) -> Vec<(u32, &ApproxCell)> {
        let mut rs: Vec<u32> = self.cells.iter().map(|c| c.r).collect();
        rs.dedup();
        rs.into_iter()
            .filter_map(|r| {
                self.cells
                    .iter()
                    .filter(|c| c.r == r)
                    .fold(None, |best: Option<&ApproxCell>, c| match best {
                        Some(b) if b.distance <= c.distance => Some(b),
                        _ => Some(c),
                    })
                    .map(|c| (r, c))
            })
            .collect()
    }

    pub fn document(&self) -> ApproximationDocument {
        let cell_doc = |c: &ApproxCell| ApproxCellDocument {
            r: c.r,
            m: c.m,
            distance: format_ratio(&c.distance),
            witness: c.witness.clone(),
        };
        ApproximationDocument {
            target: self.target.clone().into(),
            best: self.best().map(cell_doc),
            per_degree: self.per_degree().into_iter().map(|(_, c)| cell_doc(c)).collect(),
            cells: self.cells.iter().map(cell_doc).collect(),
            complete: self.complete,
            stopped: self.stopped.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxCellDocument {
    pub r: u32,
    pub m: usize,
    pub distance: String,
    pub witness: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproximationDocument {
    pub target: DistributionDocument,
    pub best: Option<ApproxCellDocument>,
    pub per_degree: Vec<ApproxCellDocument>,
    pub cells: Vec<ApproxCellDocument>,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stopped: Option<String>,
}

/// Exhaustive search over `RM_p(r, m)` for every `r <= r_max` and
/// `1 <= m <= m_max`, minimizing the statistical distance between the
/// polynomial's output distribution and `target` (a distribution on F_p).
///
/// The distance depends only on the value histogram, so distances are
/// memoized per histogram. Within a cell the witness is the codeword with the
/// smallest coefficient index (coefficients over the graded-lex monomial
/// list, last monomial most significant).
pub fn best_approximation(
    target: &Distribution,
    r_max: u32,
    m_max: usize,
    budget: &Budget,
) -> Result<ApproximationResult> {
    if target.c != 1 {
        return Err(GrmError::InvalidArgument(
            "target must be a distribution on F_p".into(),
        ));
    }
    let mut result = ApproximationResult {
        target: target.clone(),
        cells: Vec::new(),
        complete: true,
        stopped: None,
    };
    'outer: for r in 0..=r_max {
        for m in 1..=m_max {
            let params = CodeParams::new(u32::from(target.p), r, m)?;
            match search_cell(target, params, budget) {
                Ok(cell) => result.cells.push(cell),
                Err(e @ GrmError::BudgetExceeded { .. }) => {
                    result.complete = false;
                    result.stopped = Some(format!("r = {r}, m = {m}: {e}"));
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(result)
}

fn search_cell(target: &Distribution, params: CodeParams, budget: &Budget) -> Result<ApproxCell> {
    let field = params.field;
    let p = field.p();
    let points = budget.check_points("evaluation table", checked_pow(field.order(), params.m))?;
    let mons = params.monomials();
    let n = mons.len();
    budget.check_ops(
        "approximation search",
        checked_pow(field.order(), n).and_then(|k| k.checked_mul(points)),
    )?;
    let gens: Vec<Vec<u8>> = mons.iter().map(|e| monomial_table(field, e).values()).collect();
    let negs: Vec<Vec<u8>> = gens
        .iter()
        .map(|g| g.iter().map(|&v| field.neg(v)).collect())
        .collect();
    let total = BigInt::from(points);
    let distance_of = |hist: &[u64]| -> BigRational {
        let sum: BigRational = hist
            .iter()
            .zip(&target.masses)
            .map(|(&h, t)| (BigRational::new(BigInt::from(h), total.clone()) - t).abs())
            .sum();
        sum / BigRational::from_integer(2.into())
    };

    let mut cur = vec![0u8; points as usize];
    let mut hist = vec![0u64; p as usize];
    hist[0] = points;
    let mut memo: HashMap<Vec<u64>, BigRational> = HashMap::new();
    let mut digits = vec![0u8; n];
    let mut up = vec![true; n];
    let index_of = |digits: &[u8]| -> u128 {
        digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * u128::from(p) + u128::from(d))
    };
    let mut best_d = distance_of(&hist);
    let mut best_idx = 0u128;
    let mut best_digits = digits.clone();
    memo.insert(hist.clone(), best_d.clone());
    loop {
        let mut j = 0;
        while j < n {
            let can = if up[j] { digits[j] + 1 < p } else { digits[j] > 0 };
            if can {
                break;
            }
            up[j] = !up[j];
            j += 1;
        }
        if j == n {
            break;
        }
        let g = if up[j] {
            digits[j] += 1;
            &gens[j]
        } else {
            digits[j] -= 1;
            &negs[j]
        };
        for (x, &y) in cur.iter_mut().zip(g) {
            if y != 0 {
                hist[*x as usize] -= 1;
                *x = field.add(*x, y);
                hist[*x as usize] += 1;
            }
        }
        let d = match memo.get(&hist) {
            Some(d) => d.clone(),
            None => {
                let d = distance_of(&hist);
                memo.insert(hist.clone(), d.clone());
                d
            }
        };
        if d <= best_d {
            let idx = index_of(&digits);
            if d < best_d || idx < best_idx {
                best_d = d;
                best_idx = idx;
                best_digits.clone_from(&digits);
            }
        }
    }
    Ok(ApproxCell {
        r: params.r,
        m: params.m,
        distance: best_d,
        witness: params.codeword(&best_digits)?,
    })
}
