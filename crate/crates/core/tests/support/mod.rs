//! Brute-force geometry used as an independent oracle.

#![allow(dead_code)]

use std::collections::HashMap;

use rosette_core::Complex64;

/// A crossing of the sampled curve with itself, refined to the smooth
/// curve.
#[derive(Clone, Copy, Debug)]
pub struct Crossing {
    pub point: Complex64,
    pub t1: f64,
    pub t2: f64,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Newton on `γ(t1) − γ(t2) = 0` with a central-difference Jacobian.
fn refine<F: Fn(f64) -> Complex64>(f: &F, mut t1: f64, mut t2: f64) -> Option<(f64, f64)> {
    let h = 1e-7;
    for _ in 0..50 {
        let r = f(t1) - f(t2);
        if r.norm() < 1e-15 {
            break;
        }
        let d1 = (f(t1 + h) - f(t1 - h)) / (2.0 * h);
        let d2 = -(f(t2 + h) - f(t2 - h)) / (2.0 * h);
        let det = cross(d1, d2);
        if det.abs() < 1e-300 {
            return None;
        }
        let s1 = -cross(r, d2) / det;
        let s2 = -cross(d1, r) / det;
        t1 += s1;
        t2 += s2;
        if s1.abs().max(s2.abs()) < 1e-16 {
            break;
        }
    }
    Some((t1.rem_euclid(1.0), t2.rem_euclid(1.0)))
}

/// All pairwise crossings of the closed polyline through `samples` points of
/// `f` on `[0, 1)`, each refined by Newton. One entry per crossing pair of
/// branches, so an m-fold point appears m(m−1)/2 times.
pub fn brute_crossings<F: Fn(f64) -> Complex64>(f: F, samples: usize) -> Vec<Crossing> {
    let pts: Vec<Complex64> = (0..samples).map(|k| f(k as f64 / samples as f64)).collect();
    let seg = |i: usize| (pts[i], pts[(i + 1) % samples]);
    let longest = (0..samples)
        .map(|i| (seg(i).1 - seg(i).0).norm())
        .fold(0.0, f64::max);
    let cell = longest.max(1e-12);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..samples {
        let (a, b) = seg(i);
        let (x0, x1) = (
            (a.re.min(b.re) / cell).floor() as i64,
            (a.re.max(b.re) / cell).floor() as i64,
        );
        let (y0, y1) = (
            (a.im.min(b.im) / cell).floor() as i64,
            (a.im.max(b.im) / cell).floor() as i64,
        );
        for x in x0..=x1 {
            for y in y0..=y1 {
                grid.entry((x, y)).or_default().push(i);
            }
        }
    }
    let mut found: Vec<(usize, usize, f64, f64)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for bucket in grid.values() {
        for (k, &i) in bucket.iter().enumerate() {
            for &j in &bucket[k + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                if j == i + 1 || (i == 0 && j == samples - 1) || !seen.insert((i, j)) {
                    continue;
                }
                let (p1, p2) = seg(i);
                let (q1, q2) = seg(j);
                let (d1, d2) = (p2 - p1, q2 - q1);
                let den = cross(d1, d2);
                if den == 0.0 {
                    continue;
                }
                let w = q1 - p1;
                let u = cross(w, d2) / den;
                let v = cross(w, d1) / den;
                if (0.0..1.0).contains(&u) && (0.0..1.0).contains(&v) {
                    found.push((i, j, u, v));
                }
            }
        }
    }
    let n = samples as f64;
    let mut out: Vec<Crossing> = Vec::new();
    for (i, j, u, v) in found {
        let Some((t1, t2)) = refine(&f, (i as f64 + u) / n, (j as f64 + v) / n) else {
            continue;
        };
        let point = 0.5 * (f(t1) + f(t2));
        let dup = out.iter().any(|c| {
            let same = |a: f64, b: f64| {
                let d = (a - b).rem_euclid(1.0);
                d.min(1.0 - d) < 1e-9
            };
            (same(c.t1, t1) && same(c.t2, t2)) || (same(c.t1, t2) && same(c.t2, t1))
        });
        if !dup {
            out.push(Crossing { point, t1, t2 });
        }
    }
    out
}

/// Distinct crossing points, merged within `tol`.
pub fn distinct_points(crossings: &[Crossing], tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for c in crossings {
        if out.iter().all(|p| (p - c.point).norm() > tol) {
            out.push(c.point);
        }
    }
    out
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() {
            0.0
        } else {
            f64::INFINITY
        };
    }
    let one_way = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
