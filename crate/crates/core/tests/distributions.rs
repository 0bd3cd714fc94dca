mod common;

use common::*;
use grm::distributions::{
    best_approximation, combo_uniformity_check, distinguisher_gap, distribution_of,
    statistical_distance, Distribution, DistributionDocument,
};
use grm::field_poly::parse_polynomial;
use grm::ratio::format_ratio;
use grm::{Budget, GrmError};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;
use serde_json::{json, Value};

fn b() -> Budget {
    Budget::default()
}

fn poly(s: &str, p: u32, m: usize) -> grm::field_poly::Polynomial {
    parse_polynomial(s, p, m).unwrap()
}

fn masses(d: &Distribution) -> Vec<BigRational> {
    d.masses().to_vec()
}

/// Random distribution with small exact denominators.
fn random_distribution(g: &mut impl Rng, p: u32, c: usize) -> Distribution {
    let n = (p as usize).pow(c as u32);
    let weights: Vec<u64> = (0..n).map(|_| g.gen_range(0..10)).collect();
    let weights = if weights.iter().all(|&w| w == 0) {
        let mut w = weights;
        w[0] = 1;
        w
    } else {
        weights
    };
    Distribution::from_counts(p, c, &weights).unwrap()
}

#[test]
fn distribution_examples() {
    let d = distribution_of(&[poly("x1", 2, 1)], &b()).unwrap();
    assert_eq!(masses(&d), vec![q(1, 2), q(1, 2)]);
    let d = distribution_of(&[poly("x1*x2", 2, 2)], &b()).unwrap();
    assert_eq!(masses(&d), vec![q(3, 4), q(1, 4)]);
    let d = distribution_of(&[poly("x1", 2, 1), poly("x1 + 1", 2, 1)], &b()).unwrap();
    // index = first value + 2 * second value
    assert_eq!(masses(&d), vec![q(0, 1), q(1, 2), q(1, 2), q(0, 1)]);
    assert_eq!(d.c(), 2);
}

#[test]
fn distance_examples() {
    let dx = distribution_of(&[poly("x1*x2", 2, 2)], &b()).unwrap();
    let u2 = Distribution::uniform(2, 1).unwrap();
    assert_eq!(statistical_distance(&dx, &u2).unwrap(), q(1, 4));
    assert_eq!(statistical_distance(&dx, &dx).unwrap(), q(0, 1));
    let u3 = Distribution::uniform(3, 1).unwrap();
    let pm = Distribution::point_mass(3, 1, 0).unwrap();
    assert_eq!(statistical_distance(&u3, &pm).unwrap(), q(2, 3));
    assert!(matches!(statistical_distance(&u2, &u3), Err(GrmError::AlphabetMismatch(..))));
}

#[test]
fn distinguisher_examples() {
    let dx = distribution_of(&[poly("x1*x2", 2, 2)], &b()).unwrap();
    let u2 = Distribution::uniform(2, 1).unwrap();
    assert_eq!(distinguisher_gap(&dx, &u2, &[1]).unwrap(), (q(1, 4), true));
    assert_eq!(distinguisher_gap(&dx, &u2, &[0, 1]).unwrap().0, q(0, 1));
    let u3 = Distribution::uniform(3, 1).unwrap();
    let pm = Distribution::point_mass(3, 1, 0).unwrap();
    assert_eq!(distinguisher_gap(&u3, &pm, &[0]).unwrap(), (q(2, 3), true));
}

#[test]
fn combo_uniformity_examples() {
    let eps = q(1, 10);
    let r = combo_uniformity_check(&[poly("x1", 2, 2), poly("x2", 2, 2)], &eps, &b()).unwrap();
    assert!(r.per_combination.iter().all(|(_, d)| *d == q(0, 1)));
    assert_eq!(r.joint, q(0, 1));
    assert!(r.hypothesis && r.factor_ok);

    let r = combo_uniformity_check(&[poly("x1", 2, 1), poly("x1 + 1", 2, 1)], &eps, &b()).unwrap();
    let both = r.per_combination.iter().find(|(a, _)| a == &vec![1, 1]).unwrap();
    assert_eq!(both.1, q(1, 2));
    assert_eq!(r.joint, q(1, 2));
    assert!(!r.hypothesis);

    let gs = [poly("x1*x2 + x3*x4 + x5*x6", 2, 7), poly("x7", 2, 7)];
    let r = combo_uniformity_check(&gs, &q(1, 2), &b()).unwrap();
    // Oracle: joint counts by direct evaluation.
    let v0 = naive_values(&gs[0]);
    let v1 = naive_values(&gs[1]);
    let mut joint = vec![0u64; 4];
    for (a, c) in v0.iter().zip(&v1) {
        joint[*a as usize + 2 * *c as usize] += 1;
    }
    assert_eq!(r.joint, naive_distance(&joint, &[1, 1, 1, 1]));
    // P[q = 0] = 36/64, so the joint masses are 9/32, 7/32, 9/32, 7/32.
    assert_eq!(r.joint, q(1, 16));
    let w0 = histogram(2, &v0);
    assert_eq!(r.per_combination[0].1, naive_distance(&w0, &[1, 1]));
    assert!(r.factor_ok);
}

#[test]
fn distribution_validation() {
    assert!(Distribution::new(2, 1, vec![q(1, 2), q(1, 3)]).is_err());
    assert!(Distribution::new(2, 1, vec![q(3, 2), q(-1, 2)]).is_err());
    assert!(Distribution::new(3, 1, vec![q(1, 2), q(1, 2)]).is_err());
    let d = Distribution::new(3, 1, vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
    let doc = DistributionDocument::from(d.clone());
    let v = serde_json::to_value(&doc).unwrap();
    assert_eq!(v, json!({"p": 3, "c": 1, "masses": ["1/2", "1/2", "0/1"]}));
    assert_eq!(Distribution::try_from(doc).unwrap(), d);
}

#[test]
fn approximation_examples() {
    let res = best_approximation(&Distribution::uniform(2, 1).unwrap(), 1, 1, &b()).unwrap();
    let best = res.best().unwrap();
    assert_eq!(best.distance, q(0, 1));
    assert_eq!(best.witness, poly("x1", 2, 1));
    let res = best_approximation(&Distribution::uniform(3, 1).unwrap(), 1, 1, &b()).unwrap();
    assert_eq!(res.best().unwrap().distance, q(0, 1));
    assert_eq!(res.best().unwrap().witness, poly("x1", 3, 1));
    let t = Distribution::new(3, 1, vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
    let res = best_approximation(&t, 1, 3, &b()).unwrap();
    assert_eq!(res.best().unwrap().distance, q(1, 3));
}

fn approx_target() -> Distribution {
    Distribution::new(3, 1, vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap()
}

#[test]
fn oracle_best_approximation() {
    let target = [q(1, 2), q(1, 2), q(0, 1)];
    let mut cells = Vec::new();
    for r in 0..=2u32 {
        for m in 1..=3usize {
            let n = 3i64.pow(m as u32);
            let best = all_codewords(3, r, m)
                .map(|cw| {
                    let h = histogram(3, &cw);
                    let mut s = q(0, 1);
                    for (hi, ti) in h.iter().zip(&target) {
                        let d = q(*hi as i64, n) - ti;
                        s += if d < q(0, 1) { -d } else { d };
                    }
                    s / q(2, 1)
                })
                .min()
                .unwrap();
            cells.push(json!({"r": r, "m": m, "distance": format_ratio(&best)}));
        }
    }
    freeze("approx_half_half_zero_p3", &Value::Array(cells));
}

#[test]
fn best_approximation_matches_frozen_oracle() {
    let res = best_approximation(&approx_target(), 2, 3, &b()).unwrap();
    assert!(res.complete);
    let cells: Vec<Value> = res
        .cells
        .iter()
        .map(|c| json!({"r": c.r, "m": c.m, "distance": format_ratio(&c.distance)}))
        .collect();
    assert_eq!(Value::Array(cells), golden("approx_half_half_zero_p3"));
    for c in &res.cells {
        let h = histogram(3, &naive_values(&c.witness));
        let d = distribution_of(std::slice::from_ref(&c.witness), &b()).unwrap();
        assert_eq!(statistical_distance(&d, &approx_target()).unwrap(), c.distance);
        assert_eq!(
            Distribution::from_counts(3, 1, &h).unwrap(),
            d,
            "witness distribution"
        );
        assert!(c.witness.total_degree().at_most(c.r));
        assert_eq!(c.witness.m(), c.m);
    }
}

#[test]
fn best_approximation_is_monotone_and_positive() {
    let res = best_approximation(&approx_target(), 2, 3, &b()).unwrap();
    for r in 0..=2 {
        for m in 1..=3 {
            let here = &res.best_within(r, m).unwrap().distance;
            assert!(*here > q(0, 1));
            if r > 0 {
                assert!(here <= &res.best_within(r - 1, m).unwrap().distance);
            }
            if m > 1 {
                assert!(here <= &res.best_within(r, m - 1).unwrap().distance);
            }
        }
    }
    let doc = serde_json::to_value(res.document()).unwrap();
    assert_eq!(doc["per_degree"].as_array().unwrap().len(), 3);
    assert!(doc["best"]["witness"]["terms"].is_array());
}

proptest! {
    #[test]
    fn distance_is_a_metric(p in prop::sample::select(vec![2u32, 3, 5]), c in 1usize..=2, seed in any::<u64>()) {
        let mut g = rng(seed);
        let (x, y, z) = (
            random_distribution(&mut g, p, c),
            random_distribution(&mut g, p, c),
            random_distribution(&mut g, p, c),
        );
        let dxy = statistical_distance(&x, &y).unwrap();
        prop_assert_eq!(&dxy, &statistical_distance(&y, &x).unwrap());
        prop_assert!(dxy >= q(0, 1) && dxy <= q(1, 1));
        prop_assert_eq!(dxy == q(0, 1), x == y);
        let dxz = statistical_distance(&x, &z).unwrap();
        let dzy = statistical_distance(&z, &y).unwrap();
        prop_assert!(dxy <= dxz + dzy);
    }

    #[test]
    fn distinguisher_gap_never_exceeds_distance(p in prop::sample::select(vec![2u32, 3]), c in 1usize..=3, seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_distribution(&mut g, p, c);
        let y = random_distribution(&mut g, p, c);
        let n = x.alphabet_size();
        let s: Vec<usize> = (0..n).filter(|_| g.gen_bool(0.5)).collect();
        let (gap, ok) = distinguisher_gap(&x, &y, &s).unwrap();
        prop_assert!(ok);
        prop_assert!(gap <= statistical_distance(&x, &y).unwrap());
    }

    #[test]
    fn joint_marginals_and_denominators(p in prop::sample::select(vec![2u32, 3, 5]), m in 1usize..=3, seed in any::<u64>()) {
        let mut g = rng(seed);
        let f = random_poly(&mut g, p, m, 2);
        let h = random_poly(&mut g, p, m, 2);
        let joint = distribution_of(&[f.clone(), h], &b()).unwrap();
        let single = distribution_of(std::slice::from_ref(&f), &b()).unwrap();
        let total: BigRational = joint.masses().iter().sum();
        prop_assert_eq!(total, q(1, 1));
        let n = (p as i64).pow(m as u32);
        for mass in joint.masses() {
            prop_assert!((mass * q(n, 1)).is_integer());
        }
        let pp = p as usize;
        for a in 0..pp {
            let marginal: BigRational = (0..pp).map(|b| joint.masses()[a + pp * b].clone()).sum();
            prop_assert_eq!(&marginal, &single.masses()[a]);
        }
        let h1 = histogram(p, &naive_values(&f));
        prop_assert_eq!(single, Distribution::from_counts(p, 1, &h1).unwrap());
    }
}
