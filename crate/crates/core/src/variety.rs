//! The real algebraic curve `h(w, w̄) = 0` containing the image of the
//! circle, evaluated pointwise as the resultant of `A(z) = p(z) − w` and
//! `B(z) = z^n (p̄(1/z) − w̄)`.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{cis_turns, LaurentPolynomial};
use crate::numeric::{horner_complex, poly_roots, sylvester_determinant};

const ROOT_AT_ZERO: f64 = 1e-12;

/// `h` together with a bound on the size of the terms that produced it,
/// for relative tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarietyValue {
    pub value: Complex64,
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarietyEvaluator {
    coefficients: Vec<Complex64>,
}

impl VarietyEvaluator {
    pub fn new(p: &LaurentPolynomial) -> Result<Self> {
        let coefficients = p.polynomial_coefficients()?;
        if coefficients.len() < 2 {
            return Err(Error::DegreeTooLow {
                needed: 1,
                found: 0,
            });
        }
        Ok(Self { coefficients })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    fn a_poly(&self, w: Complex64) -> Vec<Complex64> {
        let mut a = self.coefficients.clone();
        a[0] -= w;
        a
    }

    fn b_poly(&self, w: Complex64) -> Vec<Complex64> {
        let mut b: Vec<Complex64> = self.coefficients.iter().rev().map(|c| c.conj()).collect();
        let n = self.degree();
        b[n] -= w.conj();
        b
    }

    /// `(−1)^{n²} lc(B)^n Π A(1/ᾱ_k)` over the roots `α_k` of `A`; the roots
    /// of `B` are the `1/ᾱ_k`.
    pub fn eval_product(&self, w: Complex64) -> Result<VarietyValue> {
        let a = self.a_poly(w);
        let n = self.degree();
        let roots = poly_roots(&a)?;
        let mut value = Complex64::one();
        let mut scale = 1.0;
        for &alpha in roots.roots() {
            if alpha.norm() <= ROOT_AT_ZERO {
                return Err(Error::Indeterminate);
            }
            let beta = alpha.conj().inv();
            value *= horner_complex(&a, beta);
            let r = beta.norm();
            scale *= a.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
        }
        let lc_b = self.coefficients[0].conj() - w.conj();
        value *= lc_b.powu(n as u32);
        scale *= Float::powi(lc_b.norm(), n as i32);
        if n % 2 == 1 {
            value = -value;
        }
        Ok(VarietyValue { value, scale })
    }

    /// The Sylvester determinant of `A` and `B` with degrees fixed at `n`.
    pub fn eval_sylvester(&self, w: Complex64) -> Complex64 {
        sylvester_determinant(&self.a_poly(w), &self.b_poly(w))
    }

    /// The product formula, falling back to the determinant when `A` has a
    /// root at the origin.
    pub fn eval(&self, w: Complex64) -> Result<VarietyValue> {
        match self.eval_product(w) {
            Err(Error::Indeterminate) => {
                let value = self.eval_sylvester(w);
                let a = self.a_poly(w);
                let b = self.b_poly(w);
                let norm = |v: &[Complex64]| v.iter().map(|c| c.norm()).sum::<f64>();
                let scale = Float::powi(norm(&a) * norm(&b), self.degree() as i32);
                Ok(VarietyValue { value, scale })
            }
            other => other,
        }
    }
}

/// `h` at `w` for the polynomial `p`.
pub fn variety_eval(p: &LaurentPolynomial, w: Complex64) -> Result<VarietyValue> {
    VarietyEvaluator::new(p)?.eval(w)
}

/// Difference relative to the larger value; near the curve, where both
/// vanish, relative to a small fraction of the term bound instead.
fn relative(a: VarietyValue, b: VarietyValue) -> f64 {
    let floor = 1e-12 * a.scale.max(b.scale);
    let size = a.value.norm().max(b.value.norm()).max(floor);
    if size == 0.0 {
        return 0.0;
    }
    (a.value - b.value).norm() / size
}

/// Relative difference of `h(σ^k w)` and `h(w)`, `σ = e^{2πi/m}`.
pub fn rotation_invariance_check(
    p: &LaurentPolynomial,
    w: Complex64,
    m: u64,
    k: i64,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("rotation order must be positive"));
    }
    let eval = VarietyEvaluator::new(p)?;
    let turned = cis_turns(k.rem_euclid(m as i64) as f64 / m as f64) * w;
    Ok(relative(eval.eval(turned)?, eval.eval(w)?))
}

/// Relative difference of `h(e^{2πiσ} w̄)` and `h(w)`, for the reflection whose
/// fixed line makes the angle `πσ` with the real axis.
pub fn mirror_invariance_check(p: &LaurentPolynomial, w: Complex64, sigma: f64) -> Result<f64> {
    let eval = VarietyEvaluator::new(p)?;
    let reflected = cis_turns(sigma) * w.conj();
    Ok(relative(eval.eval(reflected)?, eval.eval(w)?))
}

/// `|h|/scale` at `n` samples of the curve; zero up to rounding.
pub fn curve_residual(p: &LaurentPolynomial, samples: usize) -> Result<f64> {
    let eval = VarietyEvaluator::new(p)?;
    let mut worst: f64 = 0.0;
    for j in 0..samples {
        let v = eval.eval(p.eval_circle(j as f64 / samples as f64))?;
        if !v.scale.is_zero() {
            worst = worst.max(v.value.norm() / v.scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_laurent;
    use proptest::prelude::*;

    fn lp(s: &str) -> LaurentPolynomial {
        parse_laurent(s).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_curve() {
        let v = variety_eval(&lp("z"), c(2.0, 0.0)).unwrap();
        assert!((v.value.norm() - 3.0).abs() < 1e-12);
        let e = VarietyEvaluator::new(&lp("z")).unwrap();
        assert!((e.eval_sylvester(c(2.0, 0.0)) - v.value).norm() < 1e-12);
    }

    #[test]
    fn vanishes_on_curve() {
        let p = lp("z^2 + z^7 + z^12");
        let v = variety_eval(&p, p.eval_circle(0.3)).unwrap();
        assert!(v.value.norm() <= 1e-8 * v.scale);
        assert!(curve_residual(&lp("z*(z - 1/2)*(z - i)"), 128).unwrap() <= 1e-8);
    }

    #[test]
    fn root_at_origin_uses_determinant() {
        let p = lp("z^2");
        let e = VarietyEvaluator::new(&p).unwrap();
        assert_eq!(e.eval_product(Complex64::zero()), Err(Error::Indeterminate));
        let v = e.eval(Complex64::zero()).unwrap();
        assert!((v.value - e.eval_sylvester(Complex64::zero())).norm() == 0.0);
        // z^2 − 0 and 1: resultant 1
        assert!((v.value - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn invariance() {
        let p = lp("z^2 + z^7 + z^12");
        let w = c(0.7, -1.1);
        assert!(rotation_invariance_check(&p, w, 5, 2).unwrap() <= 1e-6);
        assert!(rotation_invariance_check(&lp("z"), w, 1, 0).unwrap() == 0.0);
        assert!(rotation_invariance_check(&lp("z + z^2 + z^4"), w, 5, 1).unwrap() > 0.1);

        assert!(mirror_invariance_check(&p, w, 0.0).unwrap() <= 1e-6);
        assert!(mirror_invariance_check(&lp("z"), w, 0.37).unwrap() <= 1e-10);
        assert!(mirror_invariance_check(&lp("2*z^2 - 2*i*z^7 + i*z^12"), w, 0.0).unwrap() > 0.1);
    }

    #[test]
    fn values_are_real() {
        let e = VarietyEvaluator::new(&lp("2*z^2 - 2*i*z^7 + i*z^12")).unwrap();
        for w in [c(0.3, 0.2), c(-2.0, 1.5), c(4.0, -4.0)] {
            let v = e.eval(w).unwrap();
            assert!(v.value.im.abs() <= 1e-8 * v.scale, "{v:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn product_matches_determinant(
            coefficients in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..7),
            w in (-3.0f64..3.0, -3.0f64..3.0),
        ) {
            let p = LaurentPolynomial::from_terms(
                coefficients.iter().enumerate().map(|(k, &(re, im))| (k as i64, c(re, im))),
            );
            prop_assume!(p.max_exponent().unwrap_or(0) >= 1 && p.min_exponent() == Some(0));
            let e = VarietyEvaluator::new(&p).unwrap();
            let w = c(w.0, w.1);
            let product = e.eval(w).unwrap();
            let det = e.eval_sylvester(w);
            prop_assert!((product.value - det).norm() <= 1e-6 * product.value.norm().max(det.norm()).max(1e-300)
                || (product.value - det).norm() <= 1e-9 * product.scale);
        }

        #[test]
        fn zero_on_random_curves(
            coefficients in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..7),
        ) {
            let p = LaurentPolynomial::from_terms(
                coefficients.iter().enumerate().map(|(k, &(re, im))| (k as i64, c(re, im))),
            );
            prop_assume!(p.max_exponent().unwrap_or(0) >= 1);
            prop_assert!(curve_residual(&p, 128).unwrap() <= 1e-8);
        }
    }
}
