use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{Euclid, Float};

use crate::error::{Error, Result};
use crate::expsum::ExponentialSum;

const MAX_STEPS: u64 = 500_000_000;

/// Bounds on `|γ(t)|` and, from [`density_coverage`], the fraction of a
/// polar grid over the annulus that the curve visits.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusEstimate {
    pub r_min: f64,
    pub r_max: f64,
    /// `||v| - |w||` for a two-term sum: the infimum of `|γ|` once the
    /// exponents are independent.
    pub analytic_min: Option<f64>,
    pub coverage_fraction: Option<f64>,
    pub horizon: f64,
    pub radial_cells: usize,
    pub angular_cells: usize,
}

/// Whether `conj(γ(t)) = γ(-t)` on `samples` points of `[0, 1)`.
///
/// The identity holds for real weights; a non-real weight breaks it.
pub fn conj_symmetry_check(g: &ExponentialSum, samples: usize) -> bool {
    let scale: f64 = g.weights().map(|w| w.norm()).sum();
    (0..samples).all(|j| {
        let t = j as f64 / samples as f64;
        (g.eval(t).conj() - g.eval(-t)).norm() <= 1e-10 * scale.max(1.0)
    })
}

fn common_phase(g: &ExponentialSum) -> bool {
    let mut weights = g.weights();
    let Some(first) = weights.next() else {
        return true;
    };
    weights.all(|w| {
        let ratio = w / first;
        ratio.re > 0.0 && ratio.im.abs() <= 1e-12 * ratio.norm()
    })
}

/// `|γ|` sampled at `samples` evenly spaced times in `[0, horizon]`.
///
/// When all weights share one phase the maximum is `|Σ w_k|`, attained at
/// `t = 0`.
pub fn annulus_bounds(g: &ExponentialSum, horizon: f64, samples: usize) -> Result<AnnulusEstimate> {
    if g.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if horizon.is_nan() || horizon <= 0.0 || samples < 2 {
        return Err(Error::InvalidArgument(
            "horizon must be positive and samples at least 2",
        ));
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for j in 0..samples {
        let r = g.eval(horizon * j as f64 / (samples - 1) as f64).norm();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if common_phase(g) {
        hi = g.weights().sum::<Complex64>().norm();
    }
    let analytic_min = match g.terms() {
        [(v, _), (w, _)] => Some((v.norm() - w.norm()).abs()),
        _ => None,
    };
    Ok(AnnulusEstimate {
        r_min: lo,
        r_max: hi,
        analytic_min,
        coverage_fraction: None,
        horizon,
        radial_cells: 0,
        angular_cells: 0,
    })
}

/// Time stepping and polar grid of a coverage sweep. Steps are indexed, so
/// any split of `0..steps` into shards visits the same cells.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityPlan {
    pub r_min: f64,
    pub r_max: f64,
    pub radial_cells: usize,
    pub angular_cells: usize,
    pub dt: f64,
    pub steps: u64,
    pub horizon: f64,
}

impl DensityPlan {
    /// Checks the independence precondition and picks a time step small
    /// enough that consecutive samples move less than half a cell.
    ///
    /// The grid spans the image of the torus map: `[||v| - |w||, |v| + |w|]`
    /// for two terms, `[max(0, 2 max|w_k| - Σ|w_k|), Σ|w_k|]` in general.
    pub fn new(
        g: &ExponentialSum,
        horizon: f64,
        radial_cells: usize,
        angular_cells: usize,
    ) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if horizon.is_nan() || horizon <= 0.0 || radial_cells == 0 || angular_cells == 0 {
            return Err(Error::InvalidArgument(
                "horizon and grid dimensions must be positive",
            ));
        }
        if !g.rational_independence()? {
            return Err(Error::ExponentsDependent);
        }
        let total: f64 = g.weights().map(|w| w.norm()).sum();
        let largest = g.weights().map(|w| w.norm()).fold(0.0, f64::max);
        let r_min = (2.0 * largest - total).max(0.0);
        let r_max = total;
        let dr = (r_max - r_min) / radial_cells as f64;
        let arc = r_min.max(dr) * TAU / angular_cells as f64;
        let cell = if dr > 0.0 { dr.min(arc) } else { arc };
        let speed = g.speed_bound();
        let dt = if speed > 0.0 {
            0.5 * cell / speed
        } else {
            horizon
        };
        let steps = Float::ceil(horizon / dt) as u64 + 1;
        if steps > MAX_STEPS {
            return Err(Error::InvalidArgument(
                "horizon too long for the grid resolution",
            ));
        }
        Ok(Self {
            r_min,
            r_max,
            radial_cells,
            angular_cells,
            dt,
            steps,
            horizon,
        })
    }

    fn cell_index(&self, z: Complex64) -> usize {
        let span = self.r_max - self.r_min;
        let ring = if span > 0.0 {
            (((z.norm() - self.r_min) / span) * self.radial_cells as f64).floor()
        } else {
            0.0
        };
        let ring = (ring.max(0.0) as usize).min(self.radial_cells - 1);
        let angle = Euclid::rem_euclid(&z.arg(), &TAU) / TAU;
        let sector = ((angle * self.angular_cells as f64) as usize).min(self.angular_cells - 1);
        ring * self.angular_cells + sector
    }

    pub fn cells(&self) -> usize {
        self.radial_cells * self.angular_cells
    }
}

/// Visited cells of a coverage sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageMap {
    visited: Vec<bool>,
}

impl CoverageMap {
    pub fn new(cells: usize) -> Self {
        Self {
            visited: vec![false; cells],
        }
    }

    pub fn merge(mut self, other: &Self) -> Self {
        for (a, b) in self.visited.iter_mut().zip(&other.visited) {
            *a |= *b;
        }
        self
    }

    pub fn fraction(&self) -> f64 {
        if self.visited.is_empty() {
            return 0.0;
        }
        self.visited.iter().filter(|&&v| v).count() as f64 / self.visited.len() as f64
    }
}

/// Sweeps the steps in `range` of the plan.
pub fn density_shard(
    g: &ExponentialSum,
    plan: &DensityPlan,
    range: core::ops::Range<u64>,
) -> CoverageMap {
    let mut map = CoverageMap::new(plan.cells());
    for k in range {
        let t = (k as f64 * plan.dt).min(plan.horizon);
        map.visited[plan.cell_index(g.eval(t))] = true;
    }
    map
}

/// Fraction of the polar grid over the torus-image annulus visited by
/// `γ([0, horizon])`.
pub fn density_coverage(
    g: &ExponentialSum,
    horizon: f64,
    radial_cells: usize,
    angular_cells: usize,
) -> Result<AnnulusEstimate> {
    let plan = DensityPlan::new(g, horizon, radial_cells, angular_cells)?;
    let map = density_shard(g, &plan, 0..plan.steps);
    Ok(estimate_from(g, &plan, &map))
}

/// Packages a merged coverage map.
pub fn estimate_from(g: &ExponentialSum, plan: &DensityPlan, map: &CoverageMap) -> AnnulusEstimate {
    let analytic_min = match g.terms() {
        [(v, _), (w, _)] => Some((v.norm() - w.norm()).abs()),
        _ => None,
    };
    AnnulusEstimate {
        r_min: plan.r_min,
        r_max: plan.r_max,
        analytic_min,
        coverage_fraction: Some(map.fraction()),
        horizon: plan.horizon,
        radial_cells: plan.radial_cells,
        angular_cells: plan.angular_cells,
    }
}
