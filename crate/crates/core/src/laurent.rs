//! Laurent polynomials and their restriction to the unit circle.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::expsum::{ExactReal, ExponentialSum};

/// `e^{2πiu}`, exact at quarter turns.
///
/// The argument is reduced modulo one before the trigonometric call, so
/// large `u` loses only the bits that `u` itself cannot hold.
pub fn cis_turns(u: f64) -> Complex64 {
    let r = u - Float::round(u);
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if r == 0.25 {
        Complex64::new(0.0, 1.0)
    } else if r == -0.25 {
        Complex64::new(0.0, -1.0)
    } else if r == 0.5 || r == -0.5 {
        Complex64::new(-1.0, 0.0)
    } else {
        let (s, c) = Float::sin_cos(TAU * r);
        Complex64::new(c, s)
    }
}

/// `cos(2πu)`, exactly zero at odd quarter turns.
pub(crate) fn cos_turns(u: f64) -> f64 {
    cis_turns(u).re
}

pub(crate) fn ipow(z: Complex64, n: i64) -> Complex64 {
    if n >= 0 {
        z.powu(n as u32)
    } else {
        z.inv().powu(n.unsigned_abs() as u32)
    }
}

/// A point of a sampled curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    /// Parameter in `[0, 1)`.
    pub t: f64,
    pub point: Complex64,
}

/// `Σ c_n z^n` over finitely many integer exponents.
///
/// Terms are kept sorted by exponent with no zero coefficient. The empty
/// polynomial is the zero polynomial; analysis operations reject it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentPolynomial {
    terms: Vec<(i64, Complex64)>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs in any order.
    /// Repeated exponents are summed; coefficients equal to exactly zero are
    /// dropped.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut raw: Vec<(i64, Complex64)> = terms.into_iter().collect();
        raw.sort_by_key(|&(n, _)| n);
        let mut out: Vec<(i64, Complex64)> = Vec::with_capacity(raw.len());
        for (n, c) in raw {
            match out.last_mut() {
                Some((m, acc)) if *m == n => *acc += c,
                _ => out.push((n, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out }
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        Self::from_terms(terms.into_iter().map(|(n, c)| (n, Complex64::new(c, 0.0))))
    }

    pub fn monomial(coefficient: Complex64, exponent: i64) -> Self {
        Self::from_terms([(exponent, coefficient)])
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn coefficient(&self, exponent: i64) -> Complex64 {
        self.terms
            .binary_search_by_key(&exponent, |t| t.0)
            .map(|i| self.terms[i].1)
            .unwrap_or_else(|_| Complex64::zero())
    }

    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.im == 0.0)
    }

    /// `Σ |c_n|`, the bound on `|p|` over the unit circle.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    /// GCD of the absolute values of the nonzero exponents, 0 if there are none.
    pub fn exponent_gcd(&self) -> u64 {
        self.terms
            .iter()
            .fold(0u64, |g, &(n, _)| num_integer::gcd(g, n.unsigned_abs()))
    }

    pub fn map_coefficients<F>(&self, mut f: F) -> Self
    where
        F: FnMut(i64, Complex64) -> Complex64,
    {
        Self::from_terms(self.terms.iter().map(|&(n, c)| (n, f(n, c))))
    }

    /// Coefficients of `z^{-min} p(z)` in ascending order, with the shift `min`.
    pub fn dense_coefficients(&self) -> (i64, Vec<Complex64>) {
        let (Some(lo), Some(hi)) = (self.min_exponent(), self.max_exponent()) else {
            return (0, Vec::new());
        };
        let mut dense = alloc::vec![Complex64::zero(); (hi - lo) as usize + 1];
        for &(n, c) in &self.terms {
            dense[(n - lo) as usize] = c;
        }
        (lo, dense)
    }

    /// Fails unless every exponent is nonnegative; returns ascending
    /// coefficients `c_0, …, c_n`.
    pub fn polynomial_coefficients(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if let Some(lo) = self.min_exponent().filter(|&lo| lo < 0) {
            return Err(Error::NegativeExponent(lo));
        }
        let hi = self.max_exponent().unwrap_or(0);
        let mut dense = alloc::vec![Complex64::zero(); hi as usize + 1];
        for &(n, c) in &self.terms {
            dense[n as usize] = c;
        }
        Ok(dense)
    }

    /// `Σ c_n z^n`, summed in increasing exponent order.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.is_zero() && self.min_exponent().is_some_and(|n| n < 0) {
            return Err(Error::PoleAtZero);
        }
        Ok(self
            .terms
            .iter()
            .fold(Complex64::zero(), |acc, &(n, c)| acc + c * ipow(z, n)))
    }

    /// `p(e^{2πit})`; periodic in `t` with period one.
    pub fn eval_circle(&self, t: f64) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |acc, &(n, c)| {
            acc + c * cis_turns(n as f64 * t)
        })
    }

    /// `d/dt p(e^{2πit})`.
    pub(crate) fn eval_circle_dt(&self, t: f64) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |acc, &(n, c)| {
            acc + c * Complex64::new(0.0, TAU * n as f64) * cis_turns(n as f64 * t)
        })
    }

    /// `d²/dt² p(e^{2πit})`.
    pub(crate) fn eval_circle_dtt(&self, t: f64) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |acc, &(n, c)| {
            let w = TAU * n as f64;
            acc - c * (w * w) * cis_turns(n as f64 * t)
        })
    }

    /// Termwise derivative in `z`. A constant polynomial differentiates to zero.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(n, _)| *n != 0)
                .map(|&(n, c)| (n - 1, c * n as f64)),
        )
    }

    /// `n_samples` points at the uniform parameters `j / n_samples`.
    pub fn sample(&self, n_samples: usize) -> Vec<CurveSample> {
        (0..n_samples)
            .map(|j| {
                let t = j as f64 / n_samples as f64;
                CurveSample {
                    t,
                    point: self.eval_circle(t),
                }
            })
            .collect()
    }

    /// Reads `t ↦ p(e^{2πit})` as a weighted sum of exponentials.
    pub fn to_exponential_sum(&self) -> ExponentialSum {
        ExponentialSum::from_sorted_unchecked(
            self.terms
                .iter()
                .map(|&(n, c)| (c, ExactReal::integer(n)))
                .collect(),
        )
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: Self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: Self) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|&(n, c)| (n, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: Self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            self.terms
                .iter()
                .flat_map(|&(n, c)| rhs.terms.iter().map(move |&(m, d)| (n + m, c * d))),
        )
    }
}

impl Mul<Complex64> for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: Complex64) -> LaurentPolynomial {
        self.map_coefficients(|_, c| c * rhs)
    }
}
