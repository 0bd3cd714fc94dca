//! Exhaustive enumeration of the span of a list of evaluation tables in
//! reflected base-p Gray order. Every step adds `+-1` times one generator
//! table to the running codeword and counts its nonzero entries.

use rayon::prelude::*;

use crate::budget::{checked_pow, Budget};
use crate::error::{GrmError, Result};
use crate::field_poly::{EvaluationTable, FieldParams};

/// Per-weight codeword counts for one block of the enumeration. Local counts
/// are machine words: a block never runs more than `Budget::max_ops < 2^64`
/// steps.
pub(crate) type WeightCounts = Vec<u64>;

/// Generator tables with the representation the inner loops want.
pub(crate) enum Generators {
    Bits { words: usize, gens: Vec<Vec<u64>> },
    Bytes { p: u8, gens: Vec<Vec<u8>>, negs: Vec<Vec<u8>> },
}

impl Generators {
    pub(crate) fn new(field: FieldParams, tables: &[EvaluationTable]) -> Self {
        if field.p() == 2 {
            let words = tables
                .first()
                .map_or(1, |t| t.bits().expect("p = 2 tables are bit packed").len());
            Generators::Bits {
                words,
                gens: tables.iter().map(|t| t.bits().unwrap().to_vec()).collect(),
            }
        } else {
            let gens: Vec<Vec<u8>> = tables.iter().map(|t| t.bytes().unwrap().to_vec()).collect();
            let negs = gens
                .iter()
                .map(|g| g.iter().map(|&v| field.neg(v)).collect())
                .collect();
            Generators::Bytes {
                p: field.p(),
                gens,
                negs,
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            Generators::Bits { gens, .. } => gens.len(),
            Generators::Bytes { gens, .. } => gens.len(),
        }
    }

    /// Base codeword `sum coeffs[i] * gens[i]` over the given generator
    /// indices.
    fn combination(&self, field: FieldParams, len: usize, picks: &[(usize, u8)]) -> State {
        match self {
            Generators::Bits { words, gens } => {
                let mut cur = vec![0u64; *words];
                for &(i, c) in picks {
                    if c & 1 == 1 {
                        for (x, y) in cur.iter_mut().zip(&gens[i]) {
                            *x ^= *y;
                        }
                    }
                }
                State::Bits(cur)
            }
            Generators::Bytes { gens, .. } => {
                let mut cur = vec![0u8; len];
                for &(i, c) in picks {
                    for (x, &y) in cur.iter_mut().zip(&gens[i]) {
                        *x = field.add(*x, field.mul(c, y));
                    }
                }
                State::Bytes(cur)
            }
        }
    }
}

enum State {
    Bits(Vec<u64>),
    Bytes(Vec<u8>),
}

/// Gray walk over the `p^free` codewords: `base + sum a_j gens[j]`
/// for `j < free`. `visit` receives each codeword's weight.
fn gray_walk(gens: &Generators, free: usize, base: State, mut visit: impl FnMut(u64)) {
    match (gens, base) {
        (Generators::Bits { words, gens }, State::Bits(mut cur)) => {
            if *words == 1 {
                let g: Vec<u64> = gens[..free].iter().map(|v| v[0]).collect();
                let mut w = cur[0];
                visit(u64::from(w.count_ones()));
                let steps: u64 = 1u64 << free;
                for n in 1..steps {
                    w ^= g[n.trailing_zeros() as usize];
                    visit(u64::from(w.count_ones()));
                }
            } else {
                let weight = |c: &[u64]| c.iter().map(|x| u64::from(x.count_ones())).sum::<u64>();
                visit(weight(&cur));
                let steps: u64 = 1u64 << free;
                for n in 1..steps {
                    let g = &gens[n.trailing_zeros() as usize];
                    let mut wt = 0u64;
                    for (x, y) in cur.iter_mut().zip(g) {
                        *x ^= *y;
                        wt += u64::from(x.count_ones());
                    }
                    visit(wt);
                }
            }
        }
        (Generators::Bytes { p, gens, negs }, State::Bytes(mut cur)) => {
            let p = *p;
            visit(cur.iter().filter(|&&v| v != 0).count() as u64);
            if free == 0 {
                return;
            }
            let mut digits = vec![0u8; free];
            let mut up = vec![true; free];
            loop {
                // Lowest digit that can still move in its direction; digits
                // below it are at a boundary and reverse.
                let mut j = 0;
                while j < free {
                    let can = if up[j] { digits[j] + 1 < p } else { digits[j] > 0 };
                    if can {
                        break;
                    }
                    up[j] = !up[j];
                    j += 1;
                }
                if j == free {
                    break;
                }
                let (g, step_up) = if up[j] { (&gens[j], true) } else { (&negs[j], false) };
                if step_up {
                    digits[j] += 1;
                } else {
                    digits[j] -= 1;
                }
                let mut wt = 0u64;
                for (x, &y) in cur.iter_mut().zip(g) {
                    let s = *x + y;
                    *x = if s >= p { s - p } else { s };
                    wt += u64::from(*x != 0);
                }
                visit(wt);
            }
        }
        _ => unreachable!("state packing follows the generators"),
    }
}

/// Per-step cost estimate in table-entry touches.
pub(crate) fn step_cost(field: FieldParams, points: u64) -> u64 {
    if field.p() == 2 {
        points.div_ceil(64).max(1)
    } else {
        points.max(1)
    }
}

/// One unit of parallel work: the top digits fixed to `prefix`, the rest
/// enumerated.
struct Block {
    fixed: Vec<(usize, u8)>,
    free: usize,
}

/// Counts over all `p^n` coefficient vectors of `n = tables.len()` generator
/// tables. The top `ceil(log_p(workers))` digits are fixed per block and
/// blocks are merged in order, so the result does not depend on `workers`.
pub(crate) fn span_counts(
    field: FieldParams,
    m: usize,
    tables: &[EvaluationTable],
    workers: usize,
    budget: &Budget,
) -> Result<(Vec<WeightCounts>, usize)> {
    let points = budget.check_points("evaluation table", checked_pow(field.order(), m))?;
    let n = tables.len();
    let total = checked_pow(field.order(), n);
    budget.check_ops(
        "spectrum enumeration",
        total.and_then(|t| t.checked_mul(step_cost(field, points))),
    )?;
    if n >= 64 {
        return Err(GrmError::BudgetExceeded {
            what: "spectrum enumeration".into(),
            required: format!("{}^{}", field.p(), n),
            limit: budget.max_ops,
        });
    }
    let gens = Generators::new(field, tables);
    let workers = workers.max(1);
    let mut top = 0usize;
    while top < n && (field.order().pow(top as u32) as usize) < workers {
        top += 1;
    }
    let free = n - top;
    let blocks: Vec<Block> = (0..field.order().pow(top as u32))
        .map(|idx| {
            let digits = crate::field_poly::index_point(field.p(), top, idx as usize);
            Block {
                fixed: digits
                    .into_iter()
                    .enumerate()
                    .map(|(i, d)| (free + i, d))
                    .collect(),
                free,
            }
        })
        .collect();
    let len = points as usize;
    let run = |b: &Block| -> WeightCounts {
        let mut counts = vec![0u64; len + 1];
        let base = gens.combination(field, len, &b.fixed);
        gray_walk(&gens, b.free, base, |w| counts[w as usize] += 1);
        counts
    };
    let parts: Vec<WeightCounts> = if workers == 1 || blocks.len() == 1 {
        blocks.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| GrmError::Internal(e.to_string()))?;
        pool.install(|| blocks.par_iter().map(run).collect())
    };
    Ok((parts, blocks.len()))
}

/// Counts for the symmetry-reduced walk. Over F_2 the constant generator
/// (index 0) is dropped and each weight `w` also records `2^m - w`. Over
/// larger fields only vectors whose highest nonzero coefficient is 1 are
/// visited, since scalar multiples share a weight.
pub(crate) fn reduced_counts(
    field: FieldParams,
    m: usize,
    tables: &[EvaluationTable],
    workers: usize,
    budget: &Budget,
) -> Result<(Vec<WeightCounts>, usize)> {
    let points = budget.check_points("evaluation table", checked_pow(field.order(), m))?;
    let len = points as usize;
    if field.p() == 2 {
        let rest = &tables[1.min(tables.len())..];
        let (parts, n) = span_counts(field, m, rest, workers, budget)?;
        let parts = parts
            .into_iter()
            .map(|c| {
                let mut out = c.clone();
                for (w, &k) in c.iter().enumerate() {
                    out[len - w] += k;
                }
                out
            })
            .collect();
        return Ok((parts, n));
    }
    let n = tables.len();
    let total = checked_pow(field.order(), n).map(|t| t / (field.order() - 1) + 1);
    budget.check_ops(
        "reduced spectrum enumeration",
        total.and_then(|t| t.checked_mul(step_cost(field, points))),
    )?;
    let gens = Generators::new(field, tables);
    let run = |j: &usize| -> WeightCounts {
        let mut counts = vec![0u64; len + 1];
        let base = gens.combination(field, len, &[(*j, 1)]);
        gray_walk(&gens, *j, base, |w| counts[w as usize] += 1);
        counts
    };
    let lead: Vec<usize> = (0..gens.len()).collect();
    let mut parts: Vec<WeightCounts> = if workers <= 1 {
        lead.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| GrmError::Internal(e.to_string()))?;
        pool.install(|| lead.par_iter().map(run).collect())
    };
    let mut zero = vec![0u64; len + 1];
    zero[0] = 1;
    parts.push(zero);
    let k = parts.len();
    Ok((parts, k))
}
