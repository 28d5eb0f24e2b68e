//! Nearest-point queries against the image of the unit circle.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Euclid, Float};

use crate::laurent::LaurentPolynomial;

/// Samples of `t ↦ p(e^{2πit})` bucketed on a uniform grid, answering
/// distance-to-curve queries with a Newton refinement of the parameter.
#[derive(Clone, Debug)]
pub struct CurveLocator<'a> {
    p: &'a LaurentPolynomial,
    points: Vec<Complex64>,
    origin: Complex64,
    cell: f64,
    dims: (usize, usize),
    buckets: Vec<Vec<u32>>,
    /// Longest chord between consecutive samples.
    gap: f64,
}

impl<'a> CurveLocator<'a> {
    pub fn new(p: &'a LaurentPolynomial, samples: usize) -> Self {
        let samples = samples.max(8);
        let points: Vec<Complex64> = (0..samples)
            .map(|j| p.eval_circle(j as f64 / samples as f64))
            .collect();
        let (mut lo, mut hi) = (points[0], points[0]);
        for z in &points {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let side = Float::sqrt(samples as f64).ceil();
        let extent = (hi.re - lo.re).max(hi.im - lo.im).max(f64::MIN_POSITIVE);
        let cell = (extent / side).max(extent * 1e-9).max(1e-300);
        let dims = (
            ((hi.re - lo.re) / cell) as usize + 1,
            ((hi.im - lo.im) / cell) as usize + 1,
        );
        let mut buckets = vec![Vec::new(); dims.0 * dims.1];
        for (k, z) in points.iter().enumerate() {
            let (i, j) = Self::cell_of(lo, cell, dims, *z);
            buckets[j * dims.0 + i].push(k as u32);
        }
        let gap = (0..points.len())
            .map(|k| (points[(k + 1) % points.len()] - points[k]).norm())
            .fold(0.0, f64::max);
        Self {
            p,
            points,
            origin: lo,
            cell,
            dims,
            buckets,
            gap,
        }
    }

    fn cell_of(origin: Complex64, cell: f64, dims: (usize, usize), z: Complex64) -> (usize, usize) {
        let i = ((z.re - origin.re) / cell).max(0.0) as usize;
        let j = ((z.im - origin.im) / cell).max(0.0) as usize;
        (i.min(dims.0 - 1), j.min(dims.1 - 1))
    }

    /// Index of the sample nearest to `w`.
    fn nearest_sample(&self, w: Complex64) -> usize {
        let (ci, cj) = Self::cell_of(self.origin, self.cell, self.dims, w);
        // Distance from w to the grid box, so far-away queries start at a
        // ring that can contain samples.
        let mut best = (f64::INFINITY, 0usize);
        let max_ring = self.dims.0.max(self.dims.1);
        for ring in 0..=max_ring {
            let i_lo = ci.saturating_sub(ring);
            let j_lo = cj.saturating_sub(ring);
            let i_hi = (ci + ring).min(self.dims.0 - 1);
            let j_hi = (cj + ring).min(self.dims.1 - 1);
            for j in j_lo..=j_hi {
                for i in i_lo..=i_hi {
                    let on_ring = i == ci.saturating_sub(ring)
                        || i == ci + ring
                        || j == cj.saturating_sub(ring)
                        || j == cj + ring;
                    if ring > 0 && !on_ring {
                        continue;
                    }
                    for &k in &self.buckets[j * self.dims.0 + i] {
                        let d = (self.points[k as usize] - w).norm_sqr();
                        if d < best.0 {
                            best = (d, k as usize);
                        }
                    }
                }
            }
            // Every unvisited cell is at least `ring` cells away.
            let reach = ring as f64 * self.cell;
            if best.0.is_finite() && reach * reach >= best.0 {
                break;
            }
        }
        best.1
    }

    /// Samples within `radius` of `w` that are closer than both neighbours.
    fn local_minima(&self, w: Complex64, radius: f64) -> Vec<usize> {
        let (i_lo, j_lo) = Self::cell_of(
            self.origin,
            self.cell,
            self.dims,
            w - Complex64::new(radius, radius),
        );
        let (i_hi, j_hi) = Self::cell_of(
            self.origin,
            self.cell,
            self.dims,
            w + Complex64::new(radius, radius),
        );
        let n = self.points.len();
        let dist = |k: usize| (self.points[k] - w).norm();
        let mut out = Vec::new();
        for j in j_lo..=j_hi {
            for i in i_lo..=i_hi {
                for &k in &self.buckets[j * self.dims.0 + i] {
                    let k = k as usize;
                    let d = dist(k);
                    if d <= radius && d <= dist((k + 1) % n) && d <= dist((k + n - 1) % n) {
                        out.push(k);
                    }
                }
            }
        }
        out
    }

    /// Newton on `d/dt |γ(t) - w|² = 2 Re(conj(γ - w) γ')` from sample `k`,
    /// kept within a sample step of it.
    fn refine(&self, w: Complex64, k: usize) -> (f64, f64) {
        let h = 1.0 / self.points.len() as f64;
        let start = k as f64 * h;
        let mut best = ((self.points[k] - w).norm(), start);
        let mut t = start;
        for _ in 0..8 {
            let g = self.p.eval_circle(t) - w;
            let dg = self.p.eval_circle_dt(t);
            let ddg = self.p.eval_circle_dtt(t);
            let f1 = (g.conj() * dg).re;
            let f2 = dg.norm_sqr() + (g.conj() * ddg).re;
            if f2 <= 0.0 {
                break;
            }
            t = (t - f1 / f2).clamp(start - h, start + h);
            let d = (self.p.eval_circle(t) - w).norm();
            if d < best.0 {
                best = (d, t);
            } else {
                break;
            }
        }
        best
    }

    /// Distance from `w` to the curve and the parameter of the nearest
    /// point found.
    ///
    /// Every sample that is a local minimum of the distance within one
    /// chord length of the nearest sample is refined, so that near a
    /// crossing the right branch wins.
    pub fn distance(&self, w: Complex64) -> (f64, f64) {
        let k = self.nearest_sample(w);
        let radius = (self.points[k] - w).norm() + self.gap;
        let mut best = self.refine(w, k);
        for c in self.local_minima(w, radius) {
            if c != k {
                let r = self.refine(w, c);
                if r.0 < best.0 {
                    best = r;
                }
            }
        }
        (best.0, Euclid::rem_euclid(&best.1, &1.0))
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }
}

/// Largest distance from `map(sample)` to the curve, over all samples.
pub fn image_deviation<F: Fn(Complex64) -> Complex64>(locator: &CurveLocator<'_>, map: F) -> f64 {
    locator
        .points()
        .iter()
        .map(|&z| locator.distance(map(z)).0)
        .fold(0.0, f64::max)
}
