//! Shared brute-force oracles and helpers for the integration tests. Nothing
//! here calls the library's evaluation, enumeration or rank code; oracles
//! work from polynomial terms and plain integer arithmetic.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use grm::field_poly::{FieldParams, Polynomial};
use grm::structure::Decomposition;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vectors of total degree `<= r`, each exponent `< p`, graded lex.
pub fn oracle_monomials(p: u32, m: usize, r: u32) -> Vec<Vec<u8>> {
    let mut all = Vec::new();
    let mut e = vec![0u8; m];
    loop {
        let deg: u32 = e.iter().map(|&x| u32::from(x)).sum();
        if deg <= r {
            all.push(e.clone());
        }
        let mut i = 0;
        loop {
            if i == m {
                all.sort_by(|a, b| {
                    let da: u32 = a.iter().map(|&x| u32::from(x)).sum();
                    let db: u32 = b.iter().map(|&x| u32::from(x)).sum();
                    da.cmp(&db).then_with(|| b.cmp(a))
                });
                return all;
            }
            e[i] += 1;
            if u32::from(e[i]) < p {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

pub fn point(p: u32, m: usize, mut idx: usize) -> Vec<u64> {
    (0..m)
        .map(|_| {
            let d = idx % p as usize;
            idx /= p as usize;
            d as u64
        })
        .collect()
}

fn term_value(p: u64, exps: &[u8], x: &[u64]) -> u64 {
    exps.iter()
        .zip(x)
        .fold(1, |acc, (&e, &xi)| acc * xi.pow(u32::from(e)) % p)
}

/// Values of `sum coeff * x^exps` at every point in index order.
pub fn naive_values_of_terms(p: u32, m: usize, terms: &[(Vec<u8>, u64)]) -> Vec<u8> {
    let pp = u64::from(p);
    (0..(p as usize).pow(m as u32))
        .map(|i| {
            let x = point(p, m, i);
            (terms
                .iter()
                .map(|(e, c)| c * term_value(pp, e, &x))
                .sum::<u64>()
                % pp) as u8
        })
        .collect()
}

pub fn naive_values(f: &Polynomial) -> Vec<u8> {
    let terms: Vec<(Vec<u8>, u64)> = f.terms().map(|(e, c)| (e.to_vec(), u64::from(c))).collect();
    naive_values_of_terms(u32::from(f.p()), f.m(), &terms)
}

pub fn weight_of(values: &[u8]) -> u64 {
    values.iter().filter(|&&v| v != 0).count() as u64
}

pub fn histogram(p: u32, values: &[u8]) -> Vec<u64> {
    let mut h = vec![0u64; p as usize];
    for &v in values {
        h[v as usize] += 1;
    }
    h
}

/// Every codeword of `RM_p(r, m)` as a value vector, by summing scaled
/// monomial columns over the odometer of coefficient vectors.
pub fn all_codewords(p: u32, r: u32, m: usize) -> impl Iterator<Item = Vec<u8>> {
    let mons = oracle_monomials(p, m, r);
    let cols: Vec<Vec<u8>> = mons
        .iter()
        .map(|e| naive_values_of_terms(p, m, &[(e.clone(), 1)]))
        .collect();
    let n = (p as usize).pow(m as u32);
    let total = (p as u64).pow(mons.len() as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0u64; n];
        for col in &cols {
            let c = k % u64::from(p);
            k /= u64::from(p);
            if c != 0 {
                for (acc, &x) in v.iter_mut().zip(col) {
                    *acc += c * u64::from(x);
                }
            }
        }
        v.into_iter().map(|x| (x % u64::from(p)) as u8).collect()
    })
}

pub fn naive_spectrum(p: u32, r: u32, m: usize) -> BTreeMap<u64, u64> {
    let mut s = BTreeMap::new();
    for cw in all_codewords(p, r, m) {
        *s.entry(weight_of(&cw)).or_insert(0) += 1;
    }
    s
}

/// Statistical distance between two count vectors over the same alphabet.
pub fn naive_distance(a: &[u64], b: &[u64]) -> BigRational {
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let mut s = BigRational::from_integer(0.into());
    for (&x, &y) in a.iter().zip(b) {
        let d = q(x as i64, na as i64) - q(y as i64, nb as i64);
        s += if d < q(0, 1) { -d } else { d };
    }
    s / BigRational::from_integer(2.into())
}

/// Whether `f` is a function of `gs`: `f` constant on every fiber of the
/// tuple `(g_1, ..., g_c)`.
pub fn factors_through(f: &[u8], gs: &[&[u8]]) -> bool {
    let mut seen: BTreeMap<Vec<u8>, u8> = BTreeMap::new();
    for (i, &v) in f.iter().enumerate() {
        let key: Vec<u8> = gs.iter().map(|g| g[i]).collect();
        if *seen.entry(key).or_insert(v) != v {
            return false;
        }
    }
    true
}

/// `rank_d` by trying every `c`-set of nonconstant degree-`<= d` polynomials
/// without constant term, smallest `c` first. `None` when nothing of size
/// `<= max_c` works; at `d = 0` that is every nonconstant `f`.
pub fn oracle_rank(f: &Polynomial, d: u32, max_c: usize) -> Option<usize> {
    let p = u32::from(f.p());
    let m = f.m();
    let vals = naive_values(f);
    if vals.iter().all(|&v| v == vals[0]) {
        return Some(0);
    }
    let mons: Vec<Vec<u8>> = oracle_monomials(p, m, d)
        .into_iter()
        .filter(|e| e.iter().any(|&x| x != 0))
        .collect();
    // All nonzero polynomials in span(mons), as value vectors.
    let space: Vec<Vec<u8>> = {
        let total = (p as u64).pow(mons.len() as u32);
        (1..total)
            .map(|mut k| {
                let terms: Vec<(Vec<u8>, u64)> = mons
                    .iter()
                    .map(|e| {
                        let c = k % u64::from(p);
                        k /= u64::from(p);
                        (e.clone(), c)
                    })
                    .collect();
                naive_values_of_terms(p, m, &terms)
            })
            .collect()
    };
    for c in 1..=max_c.min(space.len()) {
        let mut idx: Vec<usize> = (0..c).collect();
        loop {
            let gs: Vec<&[u8]> = idx.iter().map(|&i| space[i].as_slice()).collect();
            if factors_through(&vals, &gs) {
                return Some(c);
            }
            if !next_combination(&mut idx, space.len()) {
                break;
            }
        }
    }
    None
}

/// Advances a strictly increasing index vector over `0..n`; false when done.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let c = idx.len();
    for i in (0..c).rev() {
        if idx[i] < n - (c - i) {
            idx[i] += 1;
            for j in i + 1..c {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Uniformly random polynomial of degree `<= r`.
pub fn random_poly(rng: &mut impl Rng, p: u32, m: usize, r: u32) -> Polynomial {
    let field = FieldParams::new(p).unwrap();
    let terms: Vec<(Vec<u8>, u32)> = oracle_monomials(p, m, r)
        .into_iter()
        .map(|e| (e, rng.gen_range(0..p)))
        .collect();
    Polynomial::from_terms(field, m, terms)
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

/// Frozen oracle output. With `GRM_BLESS=1` the value is (re)written; the
/// library tests only ever read.
pub fn freeze(name: &str, value: &serde_json::Value) {
    let path = golden_path(name);
    if std::env::var_os("GRM_BLESS").is_some() {
        let mut text = serde_json::to_string_pretty(value).unwrap();
        text.push('\n');
        std::fs::write(&path, text).unwrap();
    }
    assert_eq!(&golden(name), value, "oracle disagrees with frozen {name}");
}

pub fn golden(name: &str) -> serde_json::Value {
    let path = golden_path(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()));
    serde_json::from_str(&text).unwrap()
}

/// Pointwise check of `F(g_1(x), ..., g_c(x)) = f(x)` with the oracle
/// evaluator, plus the declared factor degree bound.
pub fn reconstructs(f: &Polynomial, w: &Decomposition) -> bool {
    let p = f.p() as usize;
    let fv = naive_values(f);
    let gv: Vec<Vec<u8>> = w.factors.iter().map(naive_values).collect();
    if w.combiner.len() != p.pow(w.c() as u32) {
        return false;
    }
    let degrees_ok = w
        .factors
        .iter()
        .all(|g| g.total_degree().at_most(w.factor_degree_bound));
    degrees_ok
        && (0..fv.len()).all(|x| {
            let key = gv.iter().rev().fold(0usize, |k, g| k * p + g[x] as usize);
            w.combiner[key] == fv[x]
        })
}

/// Every polynomial of degree `<= r` over F_p in `m` variables, in oracle
/// coefficient order.
pub fn all_polys(p: u32, m: usize, r: u32) -> Vec<Polynomial> {
    let field = FieldParams::new(p).unwrap();
    let mons = oracle_monomials(p, m, r);
    let total = (p as u64).pow(mons.len() as u32);
    (0..total)
        .map(|mut k| {
            let terms: Vec<(Vec<u8>, u32)> = mons
                .iter()
                .map(|e| {
                    let c = (k % u64::from(p)) as u32;
                    k /= u64::from(p);
                    (e.clone(), c)
                })
                .collect();
            Polynomial::from_terms(field, m, terms)
        })
        .collect()
}
