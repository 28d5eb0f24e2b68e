use nalgebra::DMatrix;
use num_complex::Complex64;

use super::trim;
use crate::error::{Error, Result};

/// Determinant of the Sylvester matrix of two polynomials given by
/// ascending coefficients, computed by LU decomposition.
pub fn sylvester_resultant(p: &[Complex64], q: &[Complex64]) -> Result<Complex64> {
    let (p, q) = (trim(p), trim(q));
    if p.is_empty() || q.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(sylvester_determinant(p, q))
}

/// Sylvester determinant with the degrees fixed by the slice lengths, so
/// that it stays polynomial in parameters that make a leading coefficient
/// vanish.
pub(crate) fn sylvester_determinant(p: &[Complex64], q: &[Complex64]) -> Complex64 {
    let (m, n) = (p.len().saturating_sub(1), q.len().saturating_sub(1));
    let size = m + n;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut s = DMatrix::<Complex64>::zeros(size, size);
    for row in 0..n {
        for (k, &c) in p.iter().rev().enumerate() {
            s[(row, row + k)] = c;
        }
    }
    for row in 0..m {
        for (k, &c) in q.iter().rev().enumerate() {
            s[(n + row, row + k)] = c;
        }
    }
    s.lu().determinant()
}
