//! Self-intersections, cusps and multiple points of polynomial curves.
//!
//! With `s = cos θ` and `|x| = 1`, the points `e^{iθ}x` and `e^{-iθ}x`
//! satisfy `p(e^{±iθ}x) = h(s, x) ± i sin θ · x g(s, x)`, so for
//! `θ ∈ (0, π)` they have the same image exactly when `g(s, x) = 0`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::{Euclid, Float, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::numeric::{
    cheb_t, cheb_u, cheb_u_coefficients, poly_roots, real_roots, sylvester_determinant, ChebSeries,
};
use crate::wave::{Speed, TwoTerm, WaveField};

const AMBIGUOUS: f64 = 1e-6;
const ENDPOINT: f64 = 1e-9;
const PAIR_DEDUPE: f64 = 1e-7;
const POINT_GROUP: f64 = 1e-7;
const ON_CIRCLE: f64 = 1e-8;
const TRANSVERSAL: f64 = 1e-6;
const CONVERGED: f64 = 1e-12;
const CUSP_CREEP: f64 = 1e-2;

/// Which root of `x^{b-a} = ρ` and which sign branch produced a two-term
/// intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Direction {
    pub index: u32,
    /// `+1` for `|v| U_{a-1} + |w| U_{b-1} = 0`, `-1` for the difference.
    pub branch: i8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfIntersection {
    pub point: Complex64,
    /// All preimage parameters in `[0, 1)`, ascending; at least two.
    pub parameters: Vec<f64>,
    pub s: f64,
    pub x: Complex64,
    pub direction: Option<Direction>,
    pub modulus: f64,
}

impl SelfIntersection {
    pub fn t1(&self) -> f64 {
        self.parameters[0]
    }

    pub fn t2(&self) -> f64 {
        self.parameters[1]
    }

    /// Number of preimages of the point.
    pub fn multiplicity(&self) -> usize {
        self.parameters.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfIntersections {
    /// `d > 1` when the curve is `q(z^d)` traced `d` times; the points are
    /// then those of `q` and the parameters those of the first sheet.
    pub cover: u64,
    pub points: Vec<SelfIntersection>,
}

impl SelfIntersections {
    fn empty(cover: u64) -> Self {
        Self {
            cover,
            points: Vec::new(),
        }
    }

    /// Ordered pairs `(z₁, z₂)`, `z₁ ≠ z₂`, on the circle with
    /// `p(z₁) = p(z₂)`: two per double point.
    pub fn pair_count(&self) -> usize {
        self.points
            .iter()
            .map(|p| p.multiplicity() * (p.multiplicity() - 1))
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn nonnegative(p: &LaurentPolynomial) -> Result<Vec<Complex64>> {
    p.polynomial_coefficients()
}

/// `g(s, x) = Σ c_{k+1} U_k(s) x^k`.
pub fn dieudonne_g(p: &LaurentPolynomial, s: f64, x: Complex64) -> Result<Complex64> {
    let c = nonnegative(p)?;
    Ok(c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::zero(), |acc, (k, &ck)| {
            acc * x + ck * cheb_u(k as i64 - 1, s)
        }))
}

/// `h(s, x) = Σ c_k T_k(s) x^k`.
pub fn h_fn(p: &LaurentPolynomial, s: f64, x: Complex64) -> Result<Complex64> {
    let c = nonnegative(p)?;
    Ok(c.iter()
        .enumerate()
        .rev()
        .fold(Complex64::zero(), |acc, (k, &ck)| {
            acc * x + ck * cheb_t(k as u32, s)
        }))
}

/// `|p(e^{iθ}x) − h(cos θ, x) − i sin θ · x g(cos θ, x)|`.
pub fn lemma5_check(p: &LaurentPolynomial, theta: f64, x: Complex64) -> Result<f64> {
    let s = Float::cos(theta);
    let lhs = p.eval(Complex64::from_polar(1.0, theta) * x)?;
    let rhs = h_fn(p, s, x)? + Complex64::i() * Float::sin(theta) * x * dieudonne_g(p, s, x)?;
    Ok((lhs - rhs).norm())
}

/// A candidate `(θ, φ)` with `z₁ = e^{i(φ+θ)}`, `z₂ = e^{i(φ−θ)}`.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    theta: f64,
    phi: f64,
    direction: Option<Direction>,
}

/// Newton on `F(θ, φ) = q(z₁) − q(z₂)` over the torus. Returns the
/// polished candidate and `|F|`.
fn polish(q: &LaurentPolynomial, mut c: Candidate) -> (Candidate, f64) {
    let residual = |c: &Candidate| {
        (q.eval_circle((c.phi + c.theta) / TAU) - q.eval_circle((c.phi - c.theta) / TAU)).norm()
    };
    for _ in 0..60 {
        let (t1, t2) = ((c.phi + c.theta) / TAU, (c.phi - c.theta) / TAU);
        let f = q.eval_circle(t1) - q.eval_circle(t2);
        let (d1, d2) = (q.eval_circle_dt(t1) / TAU, q.eval_circle_dt(t2) / TAU);
        let (jt, jp) = (d1 + d2, d1 - d2);
        let det = jt.re * jp.im - jp.re * jt.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dt = -(f.re * jp.im - jp.re * f.im) / det;
        let dp = -(jt.re * f.im - f.re * jt.im) / det;
        let step = Float::hypot(dt, dp);
        if !step.is_finite() || step > 0.1 {
            break;
        }
        c.theta += dt;
        c.phi += dp;
        if step <= 1e-15 {
            break;
        }
    }
    let r = residual(&c);
    (c, r)
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = Euclid::rem_euclid(&(a - b), &1.0);
    d.min(1.0 - d)
}

/// Polishes, validates and groups candidates on the primitive curve `q`.
fn collect(
    q: &LaurentPolynomial,
    cover: u64,
    candidates: Vec<Candidate>,
) -> Result<SelfIntersections> {
    let scale = q.coefficient_norm().max(f64::MIN_POSITIVE);
    let mut pairs: Vec<(f64, f64, Candidate, Complex64)> = Vec::new();
    for c in candidates {
        let (c, r) = polish(q, c);
        if r > AMBIGUOUS * scale {
            continue;
        }
        let t1 = Euclid::rem_euclid(&((c.phi + c.theta) / TAU), &1.0);
        let t2 = Euclid::rem_euclid(&((c.phi - c.theta) / TAU), &1.0);
        let gap = circular_gap(t1, t2);
        if gap < 1e-6 {
            continue;
        }
        // Near a cusp F vanishes to third order in θ and Newton creeps
        // toward θ = 0 without converging; genuine crossings converge to
        // rounding level.
        if r > CONVERGED * scale {
            if gap < CUSP_CREEP {
                continue;
            }
            return Err(Error::AmbiguousFilter {
                residual: r / scale,
            });
        }
        let (d1, d2) = (q.eval_circle_dt(t1), q.eval_circle_dt(t2));
        if (d1.conj() * d2).im.abs() <= TRANSVERSAL * d1.norm() * d2.norm() {
            continue;
        }
        let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        if pairs
            .iter()
            .any(|p| circular_gap(p.0, t1) <= PAIR_DEDUPE && circular_gap(p.1, t2) <= PAIR_DEDUPE)
        {
            continue;
        }
        let point = 0.5 * (q.eval_circle(t1) + q.eval_circle(t2));
        pairs.push((t1, t2, c, point));
    }

    let mut points: Vec<SelfIntersection> = Vec::new();
    for (t1, t2, c, point) in pairs {
        if let Some(existing) = points
            .iter_mut()
            .find(|e| (e.point - point).norm() <= POINT_GROUP * scale)
        {
            for t in [t1, t2] {
                if existing
                    .parameters
                    .iter()
                    .all(|&u| circular_gap(u, t) > PAIR_DEDUPE)
                {
                    existing.parameters.push(t);
                }
            }
            existing.parameters.sort_by(f64::total_cmp);
            continue;
        }
        let mut theta = Euclid::rem_euclid(&c.theta, &TAU);
        let mut phi = c.phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
            // (θ, φ) and (2π − θ, φ + π) name the same pair
            phi -= PI;
            phi = -phi + 2.0 * c.phi;
        }
        let x = Complex64::from_polar(1.0, phi);
        points.push(SelfIntersection {
            point,
            parameters: alloc::vec![t1, t2],
            s: Float::cos(theta),
            x,
            direction: c.direction,
            modulus: point.norm(),
        });
    }
    let d = cover as f64;
    for p in &mut points {
        for t in &mut p.parameters {
            *t /= d;
        }
    }
    points.sort_by(|a, b| {
        a.parameters[0]
            .total_cmp(&b.parameters[0])
            .then(a.parameters[1].total_cmp(&b.parameters[1]))
    });
    Ok(SelfIntersections { cover, points })
}

/// `q` with `q(z^d) = p(z)`, `d` the GCD of the exponents.
fn primitive(p: &LaurentPolynomial) -> (LaurentPolynomial, u64) {
    let d = p.exponent_gcd().max(1);
    let q = LaurentPolynomial::from_terms(p.terms().iter().map(|&(n, c)| (n / d as i64, c)));
    (q, d)
}

/// Self-intersections of `v z^a + w z^b` from the closed form: `s` solves
/// `|v| U_{a-1}(s) ± |w| U_{b-1}(s) = 0` and `x^{b-a} = −(v/w) U_{a-1}/U_{b-1}`.
pub fn self_intersections_two_term(
    v: Complex64,
    w: Complex64,
    a: i64,
    b: i64,
) -> Result<SelfIntersections> {
    if a < 0 {
        return Err(Error::NegativeExponent(a));
    }
    let two = TwoTerm::new(a, b, v, w)?;
    let (q, d) = primitive(&two.polynomial());
    let (a, b) = (a / d as i64, b / d as i64);
    if a == 0 {
        return Ok(SelfIntersections::empty(d));
    }
    let ua = cheb_u_coefficients(a - 1);
    let ub = cheb_u_coefficients(b - 1);
    let gap = (b - a) as u32;
    let mut candidates = Vec::new();
    for branch in [1i8, -1] {
        let mut eq: Vec<f64> = alloc::vec![0.0; ub.len()];
        for (k, x) in ua.iter().enumerate() {
            eq[k] += v.norm() * x;
        }
        for (k, x) in ub.iter().enumerate() {
            eq[k] += f64::from(branch) * w.norm() * x;
        }
        for s in real_roots(&eq, -1.0, 1.0) {
            if s.abs() >= 1.0 - ENDPOINT {
                continue;
            }
            let (u_a, u_b) = (cheb_u(a - 1, s), cheb_u(b - 1, s));
            if u_b.abs() <= 1e-14 {
                continue;
            }
            let rho = -(v * u_a) / (w * u_b);
            let theta = Float::acos(s);
            for k in 0..gap {
                let phi = (rho.arg() + TAU * k as f64) / gap as f64;
                candidates.push(Candidate {
                    theta,
                    phi,
                    direction: Some(Direction { index: k, branch }),
                });
            }
        }
    }
    collect(&q, d, candidates)
}

/// Self-intersections of a polynomial curve: parameters `s` where a root
/// `x` of `g(s, ·)` lies on the unit circle, polished by Newton on the
/// torus. The resultant `R(s) = Res_x(g, g*)`, which vanishes at every such
/// `s`, is interpolated to confirm its degree bound.
pub fn self_intersections_general(p: &LaurentPolynomial) -> Result<SelfIntersections> {
    nonnegative(p)?;
    let (q, d) = primitive(p);
    let c = q.polynomial_coefficients()?;
    let n = c.len() - 1;
    if n < 2 {
        return Ok(SelfIntersections::empty(d));
    }
    let g_at =
        |s: f64| -> Vec<Complex64> { (0..n).map(|k| c[k + 1] * cheb_u(k as i64, s)).collect() };
    let resultant = |s: f64| -> f64 {
        let g = g_at(s);
        let g_star: Vec<Complex64> = g.iter().rev().map(|z| z.conj()).collect();
        sylvester_determinant(&g, &g_star).re
    };

    let bound = 2 * (n - 1) * (n - 1);
    let series = ChebSeries::interpolate(resultant, 4 * n * n, -1.0, 1.0);
    if series.effective_degree(1e-9) > bound {
        return Err(Error::InterpolationDegree { bound });
    }

    // A solution is a parameter where a root of g(s, ·) meets the unit
    // circle. On symmetric curves several roots cross together and R keeps
    // its sign, so crossings are located as local minima of the distance
    // from the roots to the circle, on a grid in θ that is dense near
    // s = ±1.
    let grid = (64 * n * n).max(4096);
    let mut samples: Vec<(f64, Vec<Complex64>, f64)> = Vec::with_capacity(grid);
    for j in 1..grid {
        let theta = PI * j as f64 / grid as f64;
        let g = g_at(Float::cos(theta));
        let len = g.iter().rposition(|z| !z.is_zero()).map_or(0, |k| k + 1);
        let roots = if len >= 2 {
            poly_roots(&g[..len])?.roots().to_vec()
        } else {
            Vec::new()
        };
        let gap = roots
            .iter()
            .map(|r| (r.norm() - 1.0).abs())
            .fold(f64::INFINITY, f64::min);
        samples.push((theta, roots, gap));
    }
    let mut candidates = Vec::new();
    for k in 0..samples.len() {
        let gap = samples[k].2;
        let left = if k > 0 {
            samples[k - 1].2
        } else {
            f64::INFINITY
        };
        let right = samples.get(k + 1).map_or(f64::INFINITY, |x| x.2);
        if gap > 0.05 || gap > left || gap > right {
            continue;
        }
        let (theta, roots, _) = &samples[k];
        for x in roots {
            if (x.norm() - 1.0).abs() <= 0.05 {
                candidates.push(Candidate {
                    theta: *theta,
                    phi: x.arg(),
                    direction: None,
                });
            }
        }
    }
    let found = collect(&q, d, candidates)?;
    let count = found.pair_count();
    if count > bound {
        return Err(Error::IntersectionBound { count, bound });
    }
    Ok(found)
}

/// Two-term curves use the closed form, everything else the resultant
/// solver.
pub fn self_intersections(p: &LaurentPolynomial) -> Result<SelfIntersections> {
    match p.terms() {
        [(a, v), (b, w)] if *a >= 0 => self_intersections_two_term(*v, *w, *a, *b),
        _ => self_intersections_general(p),
    }
}

/// Self-intersections of the two-term wave at time `t`, with
/// `v = c_a cos(2πcat)` and `w = c_b cos(2πcbt)`.
pub fn self_intersections_wave(two: &TwoTerm, speed: Speed, t: f64) -> Result<SelfIntersections> {
    let q = WaveField::new(two.polynomial(), speed)?.wave_coefficients(t);
    if q.len() < 2 {
        return Err(Error::DegenerateTime { t });
    }
    self_intersections_two_term(q.coefficient(two.a), q.coefficient(two.b), two.a, two.b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cusp {
    pub t: f64,
    pub point: Complex64,
}

/// Points where `p′` vanishes on the circle and `p″` does not.
pub fn cusps(p: &LaurentPolynomial) -> Result<Vec<Cusp>> {
    if p.is_zero() || p.terms().iter().all(|t| t.0 == 0) {
        return Err(Error::InvalidArgument("cusps need a non-constant curve"));
    }
    let dp = p.derivative();
    let ddp = dp.derivative();
    let scale: f64 = p
        .terms()
        .iter()
        .map(|&(n, c)| c.norm() * (n as f64 * n as f64).max(1.0))
        .sum();
    let (_, dense) = dp.dense_coefficients();
    let mut out = Vec::new();
    if dense.len() < 2 {
        return Ok(out);
    }
    for &r in poly_roots(&dense)?.roots() {
        if (r.norm() - 1.0).abs() > ON_CIRCLE {
            continue;
        }
        let z = r / r.norm();
        if ddp.eval(z)?.norm() <= 1e-6 * scale {
            continue;
        }
        let t = Euclid::rem_euclid(&(z.arg() / TAU), &1.0);
        out.push(Cusp {
            t,
            point: p.eval_circle(t),
        });
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Multiplicity {
    /// Parameters in `[0, 1)` of the preimages of the point, ascending.
    pub parameters: Vec<f64>,
    /// The curve's tangent lines at the preimages are pairwise distinct.
    pub ordinary: bool,
}

impl Multiplicity {
    pub fn count(&self) -> usize {
        self.parameters.len()
    }
}

/// Preimages of `w0` on the circle.
pub fn point_multiplicity(p: &LaurentPolynomial, w0: Complex64) -> Result<Multiplicity> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let shifted = p - &LaurentPolynomial::monomial(w0, 0);
    let (_, dense) = shifted.dense_coefficients();
    if dense.len() < 2 {
        return Ok(Multiplicity {
            parameters: Vec::new(),
            ordinary: true,
        });
    }
    let roots = poly_roots(&dense)?;
    let mut parameters = Vec::new();
    let mut ordinary = true;
    for (r, m) in roots.distinct() {
        if (r.norm() - 1.0).abs() <= ON_CIRCLE {
            ordinary &= m == 1;
            parameters.push(Euclid::rem_euclid(&(r.arg() / TAU), &1.0));
        }
    }
    parameters.sort_by(f64::total_cmp);
    let velocities: Vec<Complex64> = parameters.iter().map(|&t| p.eval_circle_dt(t)).collect();
    for (i, a) in velocities.iter().enumerate() {
        for b in &velocities[i + 1..] {
            ordinary &= (a * b.conj()).im.abs() > 1e-8 * a.norm() * b.norm();
        }
    }
    Ok(Multiplicity {
        parameters,
        ordinary,
    })
}
