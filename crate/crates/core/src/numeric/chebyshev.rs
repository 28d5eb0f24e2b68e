use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

/// `T_d(y)` by the three-term recurrence.
pub fn cheb_t(d: u32, y: f64) -> f64 {
    match d {
        0 => 1.0,
        1 => y,
        _ => {
            let (mut prev, mut cur) = (1.0, y);
            for _ in 1..d {
                let next = 2.0 * y * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `U_k(y)`, with `U_{-1} = 0` and `U_{-k} = -U_{k-2}` below that.
pub fn cheb_u(k: i64, y: f64) -> f64 {
    match k {
        -1 => 0.0,
        k if k < -1 => -cheb_u(-k - 2, y),
        0 => 1.0,
        _ => {
            let (mut prev, mut cur) = (1.0, 2.0 * y);
            for _ in 1..k {
                let next = 2.0 * y * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn recurrence_coefficients(first: Vec<f64>, n: usize) -> Vec<f64> {
    // P_{j+1} = 2y P_j - P_{j-1}, starting from P_0 = 1 and P_1 = first.
    if n == 0 {
        return vec![1.0];
    }
    let mut prev = vec![1.0];
    let mut cur = first;
    for _ in 1..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] += 2.0 * c;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Ascending monomial coefficients of `T_d`.
pub fn cheb_t_coefficients(d: u32) -> Vec<f64> {
    recurrence_coefficients(vec![0.0, 1.0], d as usize)
}

/// Ascending monomial coefficients of `U_k`; `U_{-1}` is the empty
/// (zero) polynomial.
pub fn cheb_u_coefficients(k: i64) -> Vec<f64> {
    match k {
        k if k < 0 => Vec::new(),
        k => recurrence_coefficients(vec![0.0, 2.0], k as usize),
    }
}

/// A truncated Chebyshev expansion `Σ c_j T_j(x)` on an interval.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebSeries {
    coefficients: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl ChebSeries {
    /// Interpolates `f` at the `degree + 1` Chebyshev points of the first
    /// kind on `[lo, hi]`.
    pub fn interpolate<F: FnMut(f64) -> f64>(mut f: F, degree: usize, lo: f64, hi: f64) -> Self {
        let n = degree + 1;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let values: Vec<f64> = (0..n)
            .map(|k| {
                let theta = PI * (k as f64 + 0.5) / n as f64;
                f(mid + half * Float::cos(theta))
            })
            .collect();
        let coefficients = (0..n)
            .map(|j| {
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * Float::cos(PI * j as f64 * (k as f64 + 0.5) / n as f64))
                    .sum();
                let scale = if j == 0 { 1.0 } else { 2.0 };
                scale * s / n as f64
            })
            .collect();
        Self {
            coefficients,
            lo,
            hi,
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let y = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coefficients.iter().skip(1).rev() {
            let b0 = 2.0 * y * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        self.coefficients.first().copied().unwrap_or(0.0) + y * b1 - b2
    }

    /// Index of the last coefficient above `tol` times the largest one.
    pub fn effective_degree(&self, tol: f64) -> usize {
        let scale = self.coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        self.coefficients
            .iter()
            .rposition(|c| c.abs() > tol * scale)
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::horner;
    use proptest::prelude::*;

    #[test]
    fn spec_values() {
        assert!((cheb_t(3, 0.5) + 1.0).abs() < 1e-15);
        assert!(cheb_u(2, 0.5).abs() < 1e-15);
        assert_eq!(cheb_t(0, 123.0), 1.0);
        assert_eq!(cheb_u(-1, 0.3), 0.0);
    }

    #[test]
    fn coefficient_arrays() {
        assert_eq!(cheb_t_coefficients(3), vec![0.0, -3.0, 0.0, 4.0]);
        assert_eq!(cheb_u_coefficients(2), vec![-1.0, 0.0, 4.0]);
        assert!(cheb_u_coefficients(-1).is_empty());
        for d in 0..12 {
            let t = cheb_t_coefficients(d);
            let u = cheb_u_coefficients(i64::from(d));
            for k in 0..=20 {
                let y = -1.2 + 0.12 * k as f64;
                assert!((horner(&t, y) - cheb_t(d, y)).abs() < 1e-9);
                assert!((horner(&u, y) - cheb_u(i64::from(d), y)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn odd_t_bounded_by_linear() {
        for d in [1u32, 3, 5, 7, 9] {
            for k in 0..=10_000 {
                let y = -1.0 + 2.0 * k as f64 / 10_000.0;
                assert!(
                    cheb_t(d, y).abs() <= f64::from(d) * y.abs() + 1e-12,
                    "d={d} y={y}"
                );
            }
        }
    }

    #[test]
    fn u_range() {
        for d in 1..15i64 {
            for k in 0..=2000 {
                let y = -1.0 + k as f64 / 1000.0;
                assert!(cheb_u(d - 1, y).abs() <= d as f64 + 1e-9);
            }
        }
    }

    #[test]
    fn series_reproduces_polynomials() {
        let p = [0.5, -1.0, 0.0, 2.0, 0.25];
        let s = ChebSeries::interpolate(|x| horner(&p, x), 8, -1.0, 1.0);
        assert_eq!(s.effective_degree(1e-12), 4);
        for k in 0..=50 {
            let x = -1.0 + k as f64 / 25.0;
            assert!((s.eval(x) - horner(&p, x)).abs() < 1e-12);
        }
        let s = ChebSeries::interpolate(|x| x * x, 4, 2.0, 5.0);
        assert!((s.eval(3.3) - 10.89).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn trigonometric_identities(d in 0u32..40, theta in -10.0f64..10.0) {
            let y = theta.cos();
            prop_assert!((cheb_t(d, y) - (f64::from(d) * theta).cos()).abs() < 1e-10);
            let k = i64::from(d);
            prop_assert!((theta.sin() * cheb_u(k, y) - ((k + 1) as f64 * theta).sin()).abs() < 1e-10);
        }
    }
}
