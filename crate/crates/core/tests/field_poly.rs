mod common;

use common::*;
use grm::field_poly::{
    apply_affine, evaluate, linalg, parse_polynomial, tabulate, total_degree, AffineMap, Degree,
    EvaluationTable, FieldParams, Polynomial,
};
use grm::{Budget, GrmError};
use proptest::prelude::*;
use rand::Rng;

fn field(p: u32) -> FieldParams {
    FieldParams::new(p).unwrap()
}

fn arb_params() -> impl Strategy<Value = (u32, usize)> {
    prop_oneof![
        (Just(2u32), 0usize..=4),
        (Just(3u32), 0usize..=4),
        (Just(5u32), 0usize..=3),
        (Just(7u32), 0usize..=2),
    ]
}

fn random_invertible(rng: &mut impl Rng, p: u32, m: usize) -> AffineMap {
    loop {
        let linear: Vec<Vec<u8>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(0..p) as u8).collect())
            .collect();
        let t: Vec<u8> = (0..m).map(|_| rng.gen_range(0..p) as u8).collect();
        if let Ok(a) = AffineMap::new(field(p), linear, t) {
            return a;
        }
    }
}

#[test]
fn parse_examples() {
    let f = parse_polynomial("x1*x2 + 1", 2, 2).unwrap();
    assert_eq!(f.coefficient(&[1, 1]), 1);
    assert_eq!(f.coefficient(&[0, 0]), 1);
    assert_eq!(f.num_terms(), 2);
    assert_eq!(parse_polynomial("x1^3", 3, 1).unwrap(), parse_polynomial("x1", 3, 1).unwrap());
    assert!(parse_polynomial("2*x1 + 4*x1", 3, 1).unwrap().is_zero());
}

#[test]
fn parse_errors() {
    assert!(matches!(parse_polynomial("x0", 2, 2), Err(GrmError::VariableOutOfRange { .. })));
    assert!(matches!(parse_polynomial("x3", 2, 2), Err(GrmError::VariableOutOfRange { .. })));
    assert!(matches!(parse_polynomial("x1 +", 2, 2), Err(GrmError::Parse { .. })));
    assert!(matches!(parse_polynomial("x1", 4, 2), Err(GrmError::NotPrime(_))));
    assert!(matches!(parse_polynomial("x1", 11, 2), Err(GrmError::UnsupportedPrime(_))));
}

#[test]
fn evaluate_examples() {
    let f = parse_polynomial("x1*x2+1", 2, 2).unwrap();
    assert_eq!(evaluate(&f, &[1, 1]).unwrap(), 0);
    let g = parse_polynomial("2*x1^2", 3, 1).unwrap();
    assert_eq!(evaluate(&g, &[2]).unwrap(), 2);
    let z = Polynomial::zero(field(5), 3);
    assert_eq!(evaluate(&z, &[4, 1, 2]).unwrap(), 0);
    assert!(matches!(evaluate(&f, &[1]), Err(GrmError::DimensionMismatch { .. })));
}

#[test]
fn tabulate_examples() {
    let b = Budget::default();
    let t = |s: &str, p, m| tabulate(&parse_polynomial(s, p, m).unwrap(), &b).unwrap().values();
    assert_eq!(t("x1", 2, 1), vec![0, 1]);
    assert_eq!(t("x1*x2", 2, 2), vec![0, 0, 0, 1]);
    assert_eq!(t("x1", 3, 1), vec![0, 1, 2]);
    let big = Polynomial::zero(field(2), 40);
    assert!(matches!(tabulate(&big, &b), Err(GrmError::BudgetExceeded { .. })));
}

#[test]
fn degree_examples() {
    assert_eq!(total_degree(&parse_polynomial("x1*x2 + x3", 2, 3).unwrap()), Degree::Finite(2));
    assert_eq!(total_degree(&parse_polynomial("x1^3", 3, 1).unwrap()), Degree::Finite(1));
    let z = Polynomial::zero(field(3), 2);
    assert_eq!(total_degree(&z), Degree::Zero);
    assert!(Degree::Zero.at_most(0));
}

#[test]
fn affine_examples() {
    let f2 = field(2);
    let x1 = parse_polynomial("x1", 2, 2).unwrap();
    let swap = AffineMap::swap(f2, 2, 1, 2).unwrap();
    assert_eq!(apply_affine(&x1, &swap).unwrap(), parse_polynomial("x2", 2, 2).unwrap());
    let f = parse_polynomial("x1*x2", 2, 2).unwrap();
    let shift = AffineMap::translation(f2, vec![1, 0]).unwrap();
    assert_eq!(
        apply_affine(&f, &shift).unwrap(),
        parse_polynomial("x1*x2 + x2", 2, 2).unwrap()
    );
    let g = parse_polynomial("x1^2", 3, 1).unwrap();
    let scale = AffineMap::new(field(3), vec![vec![2]], vec![0]).unwrap();
    assert_eq!(apply_affine(&g, &scale).unwrap(), g);
    let singular = AffineMap::new(f2, vec![vec![1, 1], vec![1, 1]], vec![0, 0]);
    assert!(matches!(singular, Err(GrmError::SingularMap { .. })));
}

#[test]
fn canonical_json() {
    let f = parse_polynomial("x2 + x1*x2 + 1", 2, 2).unwrap();
    let v = serde_json::to_value(&f).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"p": 2, "m": 2, "terms": [
            {"coeff": 1, "exps": [0, 0]},
            {"coeff": 1, "exps": [0, 1]},
            {"coeff": 1, "exps": [1, 1]},
        ]})
    );
    let back: Polynomial = serde_json::from_value(v).unwrap();
    assert_eq!(back, f);
}

#[test]
fn tabulation_matches_pointwise_exhaustively() {
    // Every polynomial of RM_2(2,3) and RM_3(1,2), plus random dense ones.
    let b = Budget::default();
    for (p, r, m) in [(2u32, 2u32, 3usize), (3, 1, 2)] {
        let mons = oracle_monomials(p, m, r);
        let total = (p as u64).pow(mons.len() as u32);
        for mut k in 0..total {
            let terms: Vec<(Vec<u8>, u32)> = mons
                .iter()
                .map(|e| {
                    let c = (k % u64::from(p)) as u32;
                    k /= u64::from(p);
                    (e.clone(), c)
                })
                .collect();
            let f = Polynomial::from_terms(field(p), m, terms);
            assert_eq!(tabulate(&f, &b).unwrap().values(), naive_values(&f));
        }
    }
    let mut g = rng(7);
    for &(p, m) in &[(2u32, 4usize), (3, 4), (5, 3), (7, 2)] {
        for _ in 0..20 {
            let f = random_poly(&mut g, p, m, (p - 1) * m as u32);
            assert_eq!(tabulate(&f, &b).unwrap().values(), naive_values(&f));
        }
    }
}

proptest! {
    #[test]
    fn print_parse_round_trip((p, m) in arb_params(), seed in any::<u64>()) {
        let f = random_poly(&mut rng(seed), p, m, (p - 1) * m as u32);
        let text = f.to_string();
        prop_assert_eq!(parse_polynomial(&text, p, m).unwrap(), f);
    }

    #[test]
    fn reduction_preserves_function(
        p in prop::sample::select(vec![2u32, 3, 5, 7]),
        m in 1usize..=3,
        raw in prop::collection::vec((0u32..20, prop::collection::vec(0u32..12, 3)), 1..6),
    ) {
        // Unreduced text: large coefficients and exponents.
        let mut text = String::new();
        let mut terms = Vec::new();
        for (c, exps) in &raw {
            let mut t = c.to_string();
            for (i, &e) in exps.iter().take(m).enumerate() {
                t.push_str(&format!("*x{}^{}", i + 1, e));
            }
            if !text.is_empty() {
                text.push_str(" + ");
            }
            text.push_str(&t);
            terms.push((exps.iter().take(m).copied().collect::<Vec<u32>>(), u64::from(*c)));
        }
        let f = parse_polynomial(&text, p, m).unwrap();
        let pp = u64::from(p);
        for i in 0..(p as usize).pow(m as u32) {
            let x = point(p, m, i);
            let want = terms.iter().map(|(e, c)| {
                // 0^0 = 1, matching the grammar's reading of x^0.
                e.iter().zip(&x).fold(c % pp, |acc, (&ei, &xi)| acc * xi.pow(ei) % pp)
            }).sum::<u64>() % pp;
            let xs: Vec<u8> = x.iter().map(|&v| v as u8).collect();
            prop_assert_eq!(u64::from(evaluate(&f, &xs).unwrap()), want);
        }
        for (e, _) in f.terms() {
            prop_assert!(e.iter().all(|&v| u32::from(v) < p));
        }
        prop_assert!(f.terms().all(|(_, c)| c != 0));
    }

    #[test]
    fn affine_preserves_weight_and_degree((p, m) in arb_params(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let f = random_poly(&mut g, p, m, (p - 1) * m as u32);
        let a = random_invertible(&mut g, p, m);
        let h = apply_affine(&f, &a).unwrap();
        let b = Budget::default();
        let tf = tabulate(&f, &b).unwrap();
        let th = tabulate(&h, &b).unwrap();
        prop_assert_eq!(tf.weight(), th.weight());
        let mut sf = tf.values();
        let mut sh = th.values();
        sf.sort_unstable();
        sh.sort_unstable();
        prop_assert_eq!(sf, sh);
        prop_assert!(h.total_degree().at_most(f.total_degree().or_zero()));
        for i in 0..(p as usize).pow(m as u32) {
            let x: Vec<u8> = point(p, m, i).iter().map(|&v| v as u8).collect();
            prop_assert_eq!(evaluate(&h, &x).unwrap(), evaluate(&f, &a.apply(&x)).unwrap());
        }
    }

    #[test]
    fn interpolation_inverts_tabulation((p, m) in arb_params(), seed in any::<u64>()) {
        let f = random_poly(&mut rng(seed), p, m, (p - 1) * m as u32);
        let t = tabulate(&f, &Budget::default()).unwrap();
        prop_assert_eq!(t.to_polynomial(), f.clone());
        let back = EvaluationTable::from_values(field(p), m, &t.values()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn substitution_is_composition(p in prop::sample::select(vec![2u32, 3, 5]), seed in any::<u64>()) {
        let mut g = rng(seed);
        let m = 2;
        let f = random_poly(&mut g, p, m, p);
        let hs: Vec<Polynomial> = (0..m).map(|_| random_poly(&mut g, p, 3, 2)).collect();
        let comp = f.substitute(&hs).unwrap();
        let hv: Vec<Vec<u8>> = hs.iter().map(naive_values).collect();
        let fv = naive_values(&f);
        let cv = naive_values(&comp);
        for i in 0..(p as usize).pow(3) {
            let inner = hv[0][i] as usize + p as usize * hv[1][i] as usize;
            prop_assert_eq!(cv[i], fv[inner]);
        }
    }

    #[test]
    fn table_addition_is_linear((p, m) in arb_params(), seed in any::<u64>(), c in 0u8..7) {
        let mut g = rng(seed);
        let c = c % p as u8;
        let f = random_poly(&mut g, p, m, 2);
        let h = random_poly(&mut g, p, m, 2);
        let b = Budget::default();
        let mut t = tabulate(&f, &b).unwrap();
        t.add_scaled(&tabulate(&h, &b).unwrap(), c);
        let mut sum = f.clone();
        sum.add_scaled(&h, c);
        prop_assert_eq!(t, tabulate(&sum, &b).unwrap());
        prop_assert_eq!(f.scale(c).total_degree().at_most(f.total_degree().or_zero()), true);
    }

    #[test]
    fn nullspace_annihilates(
        p in prop::sample::select(vec![2u32, 3, 5, 7]),
        rows in 0usize..5,
        cols in 1usize..6,
        seed in any::<u64>(),
    ) {
        let mut g = rng(seed);
        let fp = field(p);
        let mat: Vec<Vec<u8>> = (0..rows)
            .map(|_| (0..cols).map(|_| g.gen_range(0..p) as u8).collect())
            .collect();
        let ns = linalg::nullspace(fp, &mat, cols);
        prop_assert_eq!(ns.len() + linalg::rank(fp, &mat), cols);
        for v in &ns {
            for row in &mat {
                let dot = row.iter().zip(v).fold(0u8, |acc, (&a, &b)| fp.add(acc, fp.mul(a, b)));
                prop_assert_eq!(dot, 0);
            }
        }
    }
}
