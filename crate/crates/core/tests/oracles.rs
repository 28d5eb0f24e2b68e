//! Solvers checked against brute-force geometry on random instances.

mod support;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rosette_core::selfint::{
    self_intersections, self_intersections_general, self_intersections_two_term,
};
use rosette_core::variety::{curve_residual, VarietyEvaluator};
use rosette_core::winding::{winding_argument_principle, winding_sampled};
use rosette_core::{parser::parse_laurent, LaurentPolynomial};
use support::{brute_crossings, distinct_points, hausdorff};

fn random_polynomial(rng: &mut StdRng, degree: i64) -> LaurentPolynomial {
    LaurentPolynomial::from_terms((0..=degree).map(|k| {
        (
            k,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )
    }))
}

fn points_of(found: &rosette_core::selfint::SelfIntersections) -> Vec<Complex64> {
    found.points.iter().map(|x| x.point).collect()
}

#[test]
fn general_solver_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..20 {
        let degree = rng.gen_range(2..=6);
        let p = random_polynomial(&mut rng, degree);
        let found = self_intersections_general(&p).unwrap();
        let brute = brute_crossings(|t| p.eval_circle(t), 4096);
        let expected = distinct_points(&brute, 1e-7);
        let d = hausdorff(&points_of(&found), &expected);
        assert!(
            d <= 1e-6,
            "{p:?}: hausdorff {d}, {} vs {}",
            found.points.len(),
            expected.len()
        );
        assert_eq!(found.pair_count(), 2 * brute.len());
    }
}

#[test]
fn two_term_solver_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..20 {
        let a = rng.gen_range(1..=4);
        let b = a + rng.gen_range(1..=5);
        let v = Complex64::from_polar(rng.gen_range(0.2..3.0), rng.gen_range(0.0..TAU));
        let w = Complex64::from_polar(rng.gen_range(0.2..3.0), rng.gen_range(0.0..TAU));
        let found = self_intersections_two_term(v, w, a, b).unwrap();
        let p = LaurentPolynomial::from_terms([(a, v), (b, w)]);
        if found.cover > 1 {
            continue;
        }
        let brute = brute_crossings(|t| p.eval_circle(t), 4096);
        let d = hausdorff(&points_of(&found), &distinct_points(&brute, 1e-7));
        assert!(d <= 1e-6, "{a} {b} {v} {w}: {d}");
    }
}

#[test]
fn named_curves_match_brute_force() {
    for (expr, points) in [
        ("z^5 + 0.1*z", 16),
        ("2*z^3 + z^5", 4),
        ("z^2 + z^7 + z^12", 51),
        ("2*z^2 - 2*i*z^7 + i*z^12", 30),
        ("1 + z + z^2 + z^3 + z^4 + z^5", 2),
    ] {
        let p = parse_laurent(expr).unwrap();
        let found = self_intersections(&p).unwrap();
        let brute = brute_crossings(|t| p.eval_circle(t), 4096);
        assert_eq!(found.points.len(), points, "{expr}");
        assert_eq!(found.pair_count(), 2 * brute.len(), "{expr}");
        assert!(hausdorff(&points_of(&found), &distinct_points(&brute, 1e-7)) <= 1e-6);
    }
}

#[test]
fn laurent_winding_matches_numeric() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 100 {
        let lo = rng.gen_range(-4..=0);
        let hi = lo + rng.gen_range(1..=8);
        let p = LaurentPolynomial::from_terms((lo..=hi).map(|k| {
            (
                k,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        }));
        let w0 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let Ok(expected) = winding_sampled(|t| p.eval_circle(t), w0) else {
            continue;
        };
        assert_eq!(
            winding_argument_principle(&p, w0),
            Ok(expected),
            "{p:?} about {w0}"
        );
        checked += 1;
    }
}

#[test]
fn variety_vanishes_and_matches_determinant() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..20 {
        let degree = rng.gen_range(1..=6);
        let p = random_polynomial(&mut rng, degree);
        assert!(curve_residual(&p, 128).unwrap() <= 1e-8);
        let e = VarietyEvaluator::new(&p).unwrap();
        let w = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let v = e.eval(w).unwrap();
        let det = e.eval_sylvester(w);
        assert!((v.value - det).norm() <= 1e-6 * v.value.norm().max(det.norm()));
    }
}
