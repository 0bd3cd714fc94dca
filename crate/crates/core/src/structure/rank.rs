use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::decomposition::{combiner_from_keys, image_keys, Decomposition};
use crate::budget::{checked_pow, Budget};
use crate::error::{GrmError, Result};
use crate::field_poly::{
    index_point, linalg, monomial_table, point_index, tabulate, Degree, EvaluationTable,
    FieldParams, Polynomial,
};
use crate::spectrum::monomials;

/// A rank, or the marker for "no finite number of factors suffices".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RankValue {
    Finite(u32),
    Infinite,
}

impl RankValue {
    pub fn finite(self) -> Option<u32> {
        match self {
            RankValue::Finite(c) => Some(c),
            RankValue::Infinite => None,
        }
    }

    /// `true` when the rank is strictly above `t`.
    pub fn exceeds(self, t: u64) -> bool {
        match self {
            RankValue::Finite(c) => u64::from(c) > t,
            RankValue::Infinite => true,
        }
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Finite(c) => write!(f, "{c}"),
            RankValue::Infinite => write!(f, "infinite"),
        }
    }
}

/// Finite ranks serialize as numbers, the marker as the string `"infinite"`.
impl Serialize for RankValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RankValue::Finite(c) => s.serialize_u32(*c),
            RankValue::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for RankValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(c) => Ok(RankValue::Finite(c)),
            Raw::S(s) if s == "infinite" => Ok(RankValue::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad rank {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankStatus {
    /// `value` is the rank.
    Exact,
    /// Only `lower_bound` is known; no decomposition was found or checked.
    LowerBound,
    /// `value` is an upper bound with a witness; ranks below `lower_bound`
    /// are excluded but the levels in between were not searched.
    SearchExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub status: RankStatus,
    pub value: RankValue,
    pub lower_bound: RankValue,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Decomposition>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankStrategy {
    /// Shortcuts and the degree-1 invariance path, search only where needed.
    #[default]
    Auto,
    /// Subspace search from `c = 1`, with the coordinates `x_1..x_m` as the
    /// fallback witness.
    SearchOnly,
}

/// Minimal `c` with `f = F(g_1, ..., g_c)` and every `deg g_i <= d`.
pub fn rank(f: &Polynomial, d: u32, budget: &Budget) -> Result<RankResult> {
    rank_with(f, d, RankStrategy::Auto, budget)
}

pub fn rank_with(
    f: &Polynomial,
    d: u32,
    strategy: RankStrategy,
    budget: &Budget,
) -> Result<RankResult> {
    let deg = match f.total_degree() {
        Degree::Finite(k) if k >= 1 => k,
        _ => {
            return Err(GrmError::InvalidArgument(
                "rank is defined for nonconstant polynomials".into(),
            ))
        }
    };
    if d == 0 {
        // Constants cannot compute a nonconstant function.
        return Ok(RankResult {
            status: RankStatus::Exact,
            value: RankValue::Infinite,
            lower_bound: RankValue::Infinite,
            witness: None,
        });
    }
    let (upper, witness) = match strategy {
        RankStrategy::Auto => {
            if deg <= d {
                let w = Decomposition::derive(f, vec![f.clone()], d, budget)?
                    .ok_or_else(|| GrmError::Internal("identity decomposition failed".into()))?;
                return Ok(exact(1, w));
            }
            match linear_rank(f, budget) {
                Ok((c, mut w)) => {
                    w.factor_degree_bound = d;
                    if d == 1 {
                        return Ok(exact(c, w));
                    }
                    (c, w)
                }
                Err(GrmError::BudgetExceeded { .. }) => coordinate_witness(f, d, budget)?,
                Err(e) => return Err(e),
            }
        }
        RankStrategy::SearchOnly => coordinate_witness(f, d, budget)?,
    };
    if upper <= 1 {
        return Ok(exact(upper, witness));
    }
    let space = SearchSpace::new(f, d, budget)?;
    for c in 1..upper {
        match space.level(c as usize, budget) {
            Level::Found(w) => return Ok(exact(c, w)),
            Level::Empty => {}
            Level::OverBudget => {
                return Ok(RankResult {
                    status: RankStatus::SearchExhausted,
                    value: RankValue::Finite(upper),
                    lower_bound: RankValue::Finite(c),
                    witness: Some(witness),
                })
            }
        }
    }
    Ok(exact(upper, witness))
}

fn exact(c: u32, w: Decomposition) -> RankResult {
    RankResult {
        status: RankStatus::Exact,
        value: RankValue::Finite(c),
        lower_bound: RankValue::Finite(c),
        witness: Some(w),
    }
}

fn coordinate_witness(f: &Polynomial, d: u32, budget: &Budget) -> Result<(u32, Decomposition)> {
    let xs = (1..=f.m())
        .map(|i| Polynomial::variable(f.params(), f.m(), i))
        .collect::<Result<Vec<_>>>()?;
    let w = Decomposition::derive(f, xs, d, budget)?
        .ok_or_else(|| GrmError::Internal("coordinate decomposition failed".into()))?;
    Ok((f.m() as u32, w))
}

/// Basis (RREF) of `{k : f(x + k) = f(x) for all x}`.
pub fn invariance_subspace(f: &Polynomial, budget: &Budget) -> Result<Vec<Vec<u8>>> {
    let field = f.params();
    let m = f.m();
    let t = tabulate(f, budget)?;
    let n = t.len() as u64;
    budget.check_ops("invariance subspace", n.checked_mul(n))?;
    let vals = t.values();
    let p = field.p();
    let shifted = |x: usize, ki: usize, k: &[u8]| -> usize {
        if p == 2 {
            x ^ ki
        } else {
            let xs = index_point(p, m, x);
            let y: Vec<u8> = xs.iter().zip(k).map(|(&a, &b)| field.add(a, b)).collect();
            point_index(p, &y)
        }
    };
    let mut basis: Vec<Vec<u8>> = Vec::new();
    for ki in 1..vals.len() {
        let k = index_point(p, m, ki);
        let mut probe = basis.clone();
        probe.push(k.clone());
        if linalg::rank(field, &probe) == basis.len() {
            continue;
        }
        if (0..vals.len()).all(|x| vals[shifted(x, ki, &k)] == vals[x]) {
            basis.push(k);
            linalg::rref(field, &mut basis);
        }
    }
    Ok(basis)
}

/// `rank_1(f) = m - dim Inv(f)`, with the annihilator of `Inv(f)` as the
/// witness linear forms.
fn linear_rank(f: &Polynomial, budget: &Budget) -> Result<(u32, Decomposition)> {
    let field = f.params();
    let m = f.m();
    let inv = invariance_subspace(f, budget)?;
    let forms = linalg::nullspace(field, &inv, m);
    let factors: Vec<Polynomial> = forms
        .iter()
        .map(|row| {
            Polynomial::from_terms(
                field,
                m,
                row.iter().enumerate().filter(|(_, &a)| a != 0).map(|(i, &a)| {
                    let mut e = vec![0u8; m];
                    e[i] = 1;
                    (e, u32::from(a))
                }),
            )
        })
        .collect();
    let c = factors.len() as u32;
    let w = Decomposition::derive(f, factors, 1, budget)?
        .ok_or_else(|| GrmError::Internal("invariance witness does not reconstruct f".into()))?;
    Ok((c, w))
}

enum Level {
    Found(Decomposition),
    Empty,
    OverBudget,
}

/// Number of `c`-dimensional subspaces of F_p^n.
pub(crate) fn gaussian_binomial(p: u64, n: usize, c: usize) -> BigUint {
    if c > n {
        return BigUint::from(0u32);
    }
    let pb = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..c {
        num *= pb.pow((n - i) as u32) - 1u32;
        den *= pb.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// Subspaces of the span of the nonconstant monomials of degree `<= d`,
/// enumerated by RREF basis: pivot sets in lexicographic order, then free
/// entries in odometer order.
struct SearchSpace<'a> {
    f: &'a Polynomial,
    field: FieldParams,
    d: u32,
    mons: Vec<Vec<u8>>,
    tables: Vec<EvaluationTable>,
    fvals: EvaluationTable,
}

impl<'a> SearchSpace<'a> {
    fn new(f: &'a Polynomial, d: u32, budget: &Budget) -> Result<Self> {
        let field = f.params();
        let mons: Vec<Vec<u8>> = monomials(field, f.m(), d)
            .into_iter()
            .filter(|e| e.iter().any(|&x| x > 0))
            .collect();
        let tables = mons.iter().map(|e| monomial_table(field, e)).collect();
        Ok(SearchSpace {
            f,
            field,
            d,
            mons,
            tables,
            fvals: tabulate(f, budget)?,
        })
    }

    fn level(&self, c: usize, budget: &Budget) -> Level {
        let n = self.mons.len();
        let points = self.fvals.len() as u64;
        let count = gaussian_binomial(self.field.order(), n, c);
        let cost = (count * points * (c as u64 + 1)).to_u64();
        if budget.check_ops("rank search", cost).is_err()
            || budget
                .check_points("combiner table", checked_pow(self.field.order(), c))
                .is_err()
        {
            return Level::OverBudget;
        }
        let pivot_sets = combinations(n, c);
        let found = pivot_sets
            .par_iter()
            .find_map_first(|pivots| self.search_pivots(pivots));
        match found {
            Some(w) => Level::Found(w),
            None => Level::Empty,
        }
    }

    fn search_pivots(&self, pivots: &[usize]) -> Option<Decomposition> {
        let field = self.field;
        let p = field.p();
        let c = pivots.len();
        let len = self.fvals.len();
        let size = (p as usize).pow(c as u32);
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pi)| {
                (pi + 1..self.mons.len())
                    .filter(|j| !pivots.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let mut gs: Vec<EvaluationTable> = pivots.iter().map(|&pi| self.tables[pi].clone()).collect();
        let mut digits = vec![0u8; free.len()];
        loop {
            let keys = image_keys(&gs, len, p);
            if let Some(combiner) = combiner_from_keys(&self.fvals, &keys, size) {
                let factors = (0..c)
                    .map(|i| {
                        let mut row = vec![0u8; self.mons.len()];
                        row[pivots[i]] = 1;
                        for (&(ri, j), &a) in free.iter().zip(&digits) {
                            if ri == i {
                                row[j] = a;
                            }
                        }
                        Polynomial::from_terms(
                            field,
                            self.f.m(),
                            self.mons.iter().cloned().zip(row.into_iter().map(u32::from)),
                        )
                    })
                    .collect();
                return Some(Decomposition {
                    factors,
                    combiner,
                    factor_degree_bound: self.d,
                });
            }
            // Odometer step: every digit that moves changes by +1 mod p.
            let mut t = 0;
            loop {
                if t == free.len() {
                    return None;
                }
                let (i, j) = free[t];
                gs[i].add_scaled(&self.tables[j], 1);
                digits[t] = (digits[t] + 1) % p;
                if digits[t] != 0 {
                    break;
                }
                t += 1;
            }
        }
    }
}

/// All `c`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, c: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..c).collect();
    if c > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..c).rev().find(|&i| cur[i] < n - c + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..c {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::parse_polynomial;

    fn poly(text: &str, p: u32, m: usize) -> Polynomial {
        parse_polynomial(text, p, m).unwrap()
    }

    #[test]
    fn rank_examples() {
        let b = Budget::default();
        let r = rank(&poly("x1*x2", 2, 2), 1, &b).unwrap();
        assert_eq!((r.status, r.value), (RankStatus::Exact, RankValue::Finite(2)));
        let f = poly("x1*x2 + x3*x4", 2, 4);
        let r = rank(&f, 1, &b).unwrap();
        assert_eq!((r.status, r.value), (RankStatus::Exact, RankValue::Finite(4)));
        let s = rank_with(&f, 1, RankStrategy::SearchOnly, &b).unwrap();
        assert_eq!(s.value, RankValue::Finite(4));
        let f = poly("x1*x2*x3", 2, 3);
        let r = rank(&f, 2, &b).unwrap();
        assert_eq!((r.status, r.value), (RankStatus::Exact, RankValue::Finite(2)));
        assert!(r.witness.unwrap().verify(&f, &b).unwrap());
    }

    #[test]
    fn degree_conventions() {
        let b = Budget::default();
        let r = rank(&poly("x1 + x2", 2, 2), 0, &b).unwrap();
        assert_eq!(r.value, RankValue::Infinite);
        let r = rank(&poly("x1^2", 3, 1), 1, &b).unwrap();
        assert_eq!(r.value, RankValue::Finite(1));
        assert!(rank(&poly("1", 2, 2), 1, &b).is_err());
    }

    #[test]
    fn odd_prime_search_agrees_with_fast_path() {
        let b = Budget::default();
        for text in ["x1^2 + x2^2", "x1*x2", "x1^2 + 2*x1*x2 + x2^2", "x1^2*x2 + x2"] {
            let f = poly(text, 3, 2);
            let a = rank(&f, 1, &b).unwrap();
            let s = rank_with(&f, 1, RankStrategy::SearchOnly, &b).unwrap();
            assert_eq!(a.value, s.value, "{text}");
            assert!(s.witness.unwrap().verify(&f, &b).unwrap());
        }
    }

    #[test]
    fn search_reports_exhaustion() {
        let f = poly("x1*x2*x3 + x4*x5*x6", 2, 6);
        let r = rank(&f, 2, &Budget::with_ops(1 << 14)).unwrap();
        assert_eq!(r.status, RankStatus::SearchExhausted);
        assert!(r.witness.unwrap().verify(&f, &Budget::default()).unwrap());
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(gaussian_binomial(2, 4, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(3, 3, 1), BigUint::from(13u32));
        let n: usize = combinations(5, 2).len();
        assert_eq!(n, 10);
    }
}
