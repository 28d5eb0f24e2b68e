//! Numerical building blocks: Chebyshev polynomials, the ratio functions
//! `ψ` and `φ`, polynomial roots and resultants.
//!
//! Polynomial coefficient slices are in ascending order of degree
//! throughout: `[c0, c1, ..., cn]` is `c0 + c1 x + ... + cn x^n`.

mod chebyshev;
mod ratio;
mod real_roots;
mod resultant;
mod roots;

pub use chebyshev::{cheb_t, cheb_t_coefficients, cheb_u, cheb_u_coefficients, ChebSeries};
pub use ratio::{phi, psi};
pub use real_roots::real_roots;
pub(crate) use resultant::sylvester_determinant;
pub use resultant::sylvester_resultant;
pub use roots::{poly_roots, RootSet};

use num_complex::Complex64;

/// Horner evaluation of an ascending real coefficient slice.
pub fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Horner evaluation of an ascending complex coefficient slice.
pub fn horner_complex(coefficients: &[Complex64], z: Complex64) -> Complex64 {
    coefficients
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Coefficients of the derivative.
pub fn derivative_coefficients(coefficients: &[f64]) -> alloc::vec::Vec<f64> {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Drops trailing zero coefficients.
pub(crate) fn trim<T: PartialEq + num_traits::Zero>(coefficients: &[T]) -> &[T] {
    let len = coefficients
        .iter()
        .rposition(|c| !c.is_zero())
        .map_or(0, |k| k + 1);
    &coefficients[..len]
}
