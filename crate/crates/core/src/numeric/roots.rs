use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Float, Zero};

use super::{horner_complex, trim};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 500;
/// Roots closer than this (relative to `max(1, |z|)`) count as one
/// multiple root.
const CLUSTER: f64 = 1e-6;
const ACCEPT: f64 = 1e-10;

/// The roots of a polynomial, each listed as often as its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    roots: Vec<Complex64>,
    multiplicities: Vec<usize>,
    /// Largest backward error `|q(r)| / Σ|c_j||r|^j` over the roots.
    pub max_residual: f64,
}

impl RootSet {
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Estimated multiplicity of each entry of [`roots`](Self::roots).
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// One representative per cluster with its multiplicity.
    pub fn distinct(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for (&r, &m) in self.roots.iter().zip(&self.multiplicities) {
            if !out.iter().any(|(s, _)| *s == r) {
                out.push((r, m));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

fn backward_error(coefficients: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let scale = coefficients
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * r + c.norm());
    if scale == 0.0 {
        0.0
    } else {
        horner_complex(coefficients, z).norm() / scale
    }
}

fn value_and_derivative(coefficients: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coefficients.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of the polynomial with ascending `coefficients`.
///
/// Exact zero roots are split off first; the rest come from Aberth–Ehrlich
/// iteration started on a circle whose radius is the geometric mean of the
/// root moduli, followed by a Newton polish. If the iteration fails to
/// converge the companion matrix eigenvalues are used instead.
pub fn poly_roots(coefficients: &[Complex64]) -> Result<RootSet> {
    let coefficients = trim(coefficients);
    if coefficients.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if coefficients.len() == 1 {
        return Err(Error::DegreeTooLow {
            needed: 1,
            found: 0,
        });
    }
    let zeros = coefficients.iter().take_while(|c| c.is_zero()).count();
    let reduced = &coefficients[zeros..];
    let mut roots = vec![Complex64::zero(); zeros];
    let mut found = match reduced.len() - 1 {
        0 => Vec::new(),
        1 => vec![-reduced[0] / reduced[1]],
        _ => aberth(reduced).map_or_else(|| companion(reduced), Ok)?,
    };
    for z in &mut found {
        polish(reduced, z);
    }
    roots.append(&mut found);
    let max_residual = roots
        .iter()
        .map(|&z| backward_error(coefficients, z))
        .fold(0.0, f64::max);
    if !max_residual.is_finite() {
        return Err(Error::RootFinding);
    }
    let (roots, multiplicities) = cluster(roots);
    Ok(RootSet {
        roots,
        multiplicities,
        max_residual,
    })
}

fn aberth(coefficients: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coefficients.len() - 1;
    let radius = Float::powf(
        coefficients[0].norm() / coefficients[n].norm(),
        1.0 / n as f64,
    );
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, core::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp) = value_and_derivative(coefficients, z[k]);
            if backward_error(coefficients, z[k]) <= 4.0 * f64::EPSILON {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                return None;
            }
            z[k] -= step;
            if step.norm() <= 2.0 * f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Some(z);
        }
    }
    // Slow linear convergence at multiple roots still lands within the
    // acceptance threshold.
    z.iter()
        .all(|&r| backward_error(coefficients, r) <= ACCEPT)
        .then_some(z)
}

fn companion(coefficients: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coefficients.len() - 1;
    let lead = coefficients[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -coefficients[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::zero()
        }
    });
    let eig = m.schur().eigenvalues().ok_or(Error::RootFinding)?;
    Ok(eig.iter().copied().collect())
}

fn polish(coefficients: &[Complex64], z: &mut Complex64) {
    let mut best = backward_error(coefficients, *z);
    for _ in 0..3 {
        let (p, dp) = value_and_derivative(coefficients, *z);
        if dp.is_zero() {
            return;
        }
        let candidate = *z - p / dp;
        let err = backward_error(coefficients, candidate);
        if err.is_nan() || err >= best {
            return;
        }
        best = err;
        *z = candidate;
    }
}

/// Groups nearby roots, replacing each group by its centroid.
fn cluster(mut roots: Vec<Complex64>) -> (Vec<Complex64>, Vec<usize>) {
    let n = roots.len();
    let mut group = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if group[i] != usize::MAX {
            continue;
        }
        group[i] = next;
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            for j in 0..n {
                if group[j] == usize::MAX
                    && (roots[k] - roots[j]).norm() <= CLUSTER * roots[k].norm().max(1.0)
                {
                    group[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    let mut multiplicities = vec![0; n];
    for g in 0..next {
        let members: Vec<usize> = (0..n).filter(|&k| group[k] == g).collect();
        let centroid = members.iter().map(|&k| roots[k]).sum::<Complex64>() / members.len() as f64;
        for &k in &members {
            if members.len() > 1 {
                roots[k] = centroid;
            }
            multiplicities[k] = members.len();
        }
    }
    (roots, multiplicities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn square_roots_of_one() {
        let r = poly_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let roots = sorted(r.roots().to_vec());
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((roots[1] - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(r.multiplicities(), &[1, 1]);
    }

    #[test]
    fn fourth_roots_of_minus_one() {
        let r = poly_roots(&[
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(r.len(), 4);
        for z in r.roots() {
            assert!((z.norm() - 1.0).abs() < 1e-14);
            assert!((z.powu(4) + 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn double_root_reported() {
        let r = poly_roots(&[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r.multiplicities(), &[2, 2]);
        assert!((r.roots()[0] + 1.0).norm() < 1e-7);
        assert_eq!(r.distinct().len(), 1);
    }

    #[test]
    fn zero_roots_split_off() {
        let r = poly_roots(&[
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-4.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ])
        .unwrap();
        let roots = sorted(r.roots().to_vec());
        assert_eq!(roots.len(), 4);
        assert!((roots[0] + 2.0).norm() < 1e-14);
        assert_eq!(roots[1], c(0.0, 0.0));
        assert_eq!(roots[2], c(0.0, 0.0));
        assert!((roots[3] - 2.0).norm() < 1e-14);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert_eq!(poly_roots(&[]), Err(Error::ZeroPolynomial));
        assert_eq!(poly_roots(&[c(0.0, 0.0)]), Err(Error::ZeroPolynomial));
        assert!(matches!(
            poly_roots(&[c(3.0, 0.0)]),
            Err(Error::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn deterministic() {
        let p: Vec<Complex64> = (0..12)
            .map(|k| c((k as f64).sin(), (k as f64 * 0.7).cos()))
            .collect();
        assert_eq!(poly_roots(&p).unwrap(), poly_roots(&p).unwrap());
    }

    #[test]
    fn companion_fallback_agrees() {
        let p = [c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)];
        let roots = sorted(companion(&p).unwrap());
        for (z, expected) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z - expected).norm() < 1e-10);
        }
    }

    #[test]
    fn high_degree_unit_roots() {
        let mut p = vec![c(0.0, 0.0); 61];
        p[0] = c(-1.0, 0.0);
        p[60] = c(1.0, 0.0);
        let r = poly_roots(&p).unwrap();
        assert!(r.max_residual < 1e-13);
        for z in r.roots() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn product_reproduces_monic_input(
            raw in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..12)
        ) {
            let mut p: Vec<Complex64> = raw.iter().map(|&(re, im)| c(re, im)).collect();
            p.push(c(1.0, 0.0));
            prop_assume!(p[0].norm() > 1e-3);
            let r = poly_roots(&p).unwrap();
            prop_assert!(r.max_residual <= 1e-10);
            let mut prod = vec![c(1.0, 0.0)];
            for &z in r.roots() {
                let mut next = vec![c(0.0, 0.0); prod.len() + 1];
                for (k, &a) in prod.iter().enumerate() {
                    next[k + 1] += a;
                    next[k] -= a * z;
                }
                prod = next;
            }
            let scale = p.iter().map(|c| c.norm()).fold(1.0, f64::max);
            for (a, b) in prod.iter().zip(&p) {
                prop_assert!((a - b).norm() <= 1e-8 * scale, "{a} vs {b}");
            }
        }
    }
}
