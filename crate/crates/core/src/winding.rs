//! Winding numbers: numeric angle tracking, the argument principle, and
//! the closed form for two-term waves.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::geometry::CurveLocator;
use crate::laurent::{cos_turns, LaurentPolynomial};
use crate::numeric::{cheb_t_coefficients, horner, poly_roots, real_roots};
use crate::wave::{Speed, TwoTerm, WaveField};

const MIN_DISTANCE: f64 = 1e-6;
const ON_CURVE: f64 = 1e-8;
const BOUNDARY: f64 = 1e-8;
const K_TOL: f64 = 1e-9;
const COS_ZERO: f64 = 1e-12;
const TIME_DEDUPE: f64 = 1e-9;

/// Winding number of the closed polyline through `points` (the last point
/// joins the first) about `w0`.
pub fn winding_numeric(points: &[Complex64], w0: Complex64) -> Result<i64> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument("need at least three samples"));
    }
    let mut total = 0.0;
    let mut prev = points[points.len() - 1] - w0;
    let mut nearest = prev.norm();
    for &z in points {
        let cur = z - w0;
        nearest = nearest.min(cur.norm());
        if nearest <= MIN_DISTANCE {
            return Err(Error::PointOnCurve { distance: nearest });
        }
        let step = (cur / prev).arg();
        if step.abs() >= PI / 2.0 {
            return Err(Error::SamplesTooSparse { step });
        }
        total += step;
        prev = cur;
    }
    Ok(Float::round(total / TAU) as i64)
}

/// [`winding_numeric`] of `t ↦ f(t)` on `[0, 1)`, doubling the sample count
/// from 1024 until the angular steps are small enough.
pub fn winding_sampled<F: Fn(f64) -> Complex64>(f: F, w0: Complex64) -> Result<i64> {
    let mut n = 1024usize;
    loop {
        let points: Vec<Complex64> = (0..n).map(|k| f(k as f64 / n as f64)).collect();
        match winding_numeric(&points, w0) {
            Err(Error::SamplesTooSparse { .. }) if n < 1 << 22 => n *= 2,
            other => return other,
        }
    }
}

/// Zeros of `z^μ (p − w0)` inside the unit disk minus `μ`, where `μ` is the
/// pole order at the origin.
pub fn winding_argument_principle(p: &LaurentPolynomial, w0: Complex64) -> Result<i64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let locator = CurveLocator::new(p, 4096);
    let (distance, _) = locator.distance(w0);
    if distance <= ON_CURVE {
        return Err(Error::PointOnCurve { distance });
    }
    let shifted = p - &LaurentPolynomial::monomial(w0, 0);
    let (lo, dense) = shifted.dense_coefficients();
    let roots = if dense.len() > 1 {
        poly_roots(&dense)?.roots().to_vec()
    } else {
        Vec::new()
    };
    let mut inside = 0i64;
    for &r in &roots {
        let modulus = r.norm();
        if (modulus - 1.0).abs() <= BOUNDARY {
            return Err(Error::BoundaryAmbiguous { modulus });
        }
        if modulus < 1.0 {
            inside += 1;
        }
    }
    // dense = z^{-lo}(p − w0); for lo > 0 the origin is a root of order lo.
    Ok(inside + lo)
}

/// `N(t, 0)` for the two-term wave: `a` when `|K| < 1`, `b` when `|K| > 1`
/// and `None` when the curve passes through the origin.
pub fn two_term_winding(two: &TwoTerm, speed: Speed, t: f64) -> Result<Option<i64>> {
    let c = speed.value();
    let cos_a = cos_turns(two.a as f64 * c * t);
    let cos_b = cos_turns(two.b as f64 * c * t);
    let (zero_a, zero_b) = (cos_a.abs() <= COS_ZERO, cos_b.abs() <= COS_ZERO);
    match (zero_a, zero_b) {
        (true, true) => return Err(Error::DegeneratePoint { t }),
        (true, false) => return Ok(Some(two.b)),
        (false, true) => return Ok(Some(two.a)),
        _ => {}
    }
    let k = (two.c_b.norm() * cos_b.abs()) / (two.c_a.norm() * cos_a.abs());
    Ok(if k < 1.0 - K_TOL {
        Some(two.a)
    } else if k > 1.0 + K_TOL {
        Some(two.b)
    } else {
        None
    })
}

/// Times in `(lo, hi)` where `wb |cos(2πbct)| = wa |cos(2πact)|`, each with
/// whether the difference changes sign there.
///
/// With `y = cos(2πct)` the condition is the polynomial equation
/// `wb² T_b(y)² − wa² T_a(y)² = 0`; each root `y` gives the times
/// `(k ± acos(y)/2π)/c`.
pub(crate) fn crossing_times(
    a: u64,
    wa: f64,
    b: u64,
    wb: f64,
    c: f64,
    lo: f64,
    hi: f64,
) -> Vec<(f64, bool)> {
    let square = |d: u64, w: f64| {
        let t = cheb_t_coefficients(d as u32);
        let mut out = alloc::vec![0.0; 2 * t.len() - 1];
        for (i, x) in t.iter().enumerate() {
            for (j, y) in t.iter().enumerate() {
                out[i + j] += w * w * x * y;
            }
        }
        out
    };
    let mut poly = square(b, wb);
    for (i, x) in square(a, wa).into_iter().enumerate() {
        if i >= poly.len() {
            poly.push(0.0);
        }
        poly[i] -= x;
    }
    let mut ys = real_roots(&poly, -1.0, 1.0);
    let scale = wa * wa + wb * wb;
    for end in [-1.0, 1.0] {
        if horner(&poly, end).abs() <= 1e-12 * scale {
            ys.push(end);
        }
    }

    let diff =
        |t: f64| wb * cos_turns(b as f64 * c * t).abs() - wa * cos_turns(a as f64 * c * t).abs();
    let squared = |t: f64| {
        let (x, y) = (cos_turns(b as f64 * c * t), cos_turns(a as f64 * c * t));
        wb * wb * x * x - wa * wa * y * y
    };
    let squared_dt = |t: f64| {
        let (theta_b, theta_a) = (TAU * b as f64 * c * t, TAU * a as f64 * c * t);
        -TAU * c
            * (wb * wb * b as f64 * Float::sin(2.0 * theta_b)
                - wa * wa * a as f64 * Float::sin(2.0 * theta_a))
    };

    let mut times = Vec::new();
    let k_lo = Float::floor(c * lo) as i64 - 1;
    let k_hi = Float::ceil(c * hi) as i64 + 1;
    for &y in &ys {
        let offset = y.clamp(-1.0, 1.0).acos() / TAU;
        for k in k_lo..=k_hi {
            for sign in [-1.0, 1.0] {
                let mut t = (k as f64 + sign * offset) / c;
                // Newton on the smooth squared form recovers accuracy lost
                // by acos near ±1.
                for _ in 0..8 {
                    let d = squared_dt(t);
                    if d == 0.0 {
                        break;
                    }
                    let step = squared(t) / d;
                    if !step.is_finite() || step.abs() > 1e-4 / c {
                        break;
                    }
                    t -= step;
                    if step.abs() <= 1e-16 * t.abs().max(1.0) {
                        break;
                    }
                }
                if t > lo + TIME_DEDUPE && t < hi - TIME_DEDUPE {
                    times.push(t);
                }
            }
        }
    }
    times.sort_by(f64::total_cmp);
    times.dedup_by(|x, y| (*x - *y).abs() <= TIME_DEDUPE);
    let h = 1e-7 / (c * b.max(1) as f64);
    times
        .into_iter()
        .map(|t| {
            let (left, right) = (diff(t - h), diff(t + h));
            (
                t,
                (left < 0.0) != (right < 0.0) && left != 0.0 && right != 0.0,
            )
        })
        .collect()
}

/// Piecewise-constant winding number about the origin of a two-term wave.
#[derive(Clone, Debug, PartialEq)]
pub struct WindingProfile {
    pub speed: f64,
    pub period: f64,
    pub window: (f64, f64),
    /// Interior times where the curve crosses the origin, increasing.
    pub breakpoints: Vec<f64>,
    /// One value per segment between consecutive breakpoints.
    pub values: Vec<Option<i64>>,
    /// Origin crossings, including touches that leave the winding unchanged.
    pub undefined_times: Vec<f64>,
    /// Times where the whole curve collapses to a point.
    pub degenerate_times: Vec<f64>,
}

impl WindingProfile {
    /// The value on the segment containing `t`.
    pub fn value_at(&self, t: f64) -> Option<i64> {
        let k = self.breakpoints.partition_point(|&b| b <= t);
        self.values[k]
    }
}

/// The winding profile over `window` (default `[0, T]`).
pub fn winding_profile(
    two: &TwoTerm,
    speed: Speed,
    window: Option<(f64, f64)>,
) -> Result<WindingProfile> {
    let period = WaveField::new(two.polynomial(), speed)?
        .period()
        .ok_or(Error::InvalidArgument("constant wave"))?;
    let (lo, hi) = window.unwrap_or((0.0, period));
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidArgument("empty time window"));
    }
    let c = speed.value();
    let (a, b) = (two.a.unsigned_abs(), two.b.unsigned_abs());
    let crossings = crossing_times(a, two.c_a.norm(), b, two.c_b.norm(), c, lo, hi);
    let breakpoints: Vec<f64> = crossings.iter().filter(|x| x.1).map(|x| x.0).collect();
    let undefined_times: Vec<f64> = crossings.iter().map(|x| x.0).collect();
    let degenerate_times = undefined_times
        .iter()
        .copied()
        .filter(|&t| {
            matches!(
                two_term_winding(two, speed, t),
                Err(Error::DegeneratePoint { .. })
            )
        })
        .collect();
    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(lo);
    edges.extend_from_slice(&breakpoints);
    edges.push(hi);
    let values = edges
        .windows(2)
        .map(|w| midpoint_winding(two, speed, w[0], w[1], &undefined_times))
        .collect::<Result<Vec<_>>>()?;
    Ok(WindingProfile {
        speed: c,
        period,
        window: (lo, hi),
        breakpoints,
        values,
        undefined_times,
        degenerate_times,
    })
}

/// The winding on `(l, r)`, evaluated away from any touch point inside.
fn midpoint_winding(
    two: &TwoTerm,
    speed: Speed,
    l: f64,
    r: f64,
    touches: &[f64],
) -> Result<Option<i64>> {
    let mut cuts: Vec<f64> = touches
        .iter()
        .copied()
        .filter(|&t| t > l && t < r)
        .collect();
    cuts.insert(0, l);
    cuts.push(r);
    let widest = cuts
        .windows(2)
        .max_by(|x, y| (x[1] - x[0]).total_cmp(&(y[1] - y[0])))
        .map(|w| 0.5 * (w[0] + w[1]))
        .unwrap_or(0.5 * (l + r));
    match two_term_winding(two, speed, widest) {
        Err(Error::DegeneratePoint { .. }) => Ok(None),
        other => other,
    }
}

/// Winding about the origin of the wave curve at time `t`, by angle
/// tracking. Fails when the curve passes through the origin.
pub fn wave_winding(field: &WaveField, t: f64) -> Result<i64> {
    let coefficients = field.wave_coefficients(t);
    if coefficients.is_zero() {
        return Err(Error::DegeneratePoint { t });
    }
    winding_sampled(|x| coefficients.eval_circle(x), Complex64::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_laurent;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn points(p: &str, n: usize) -> Vec<Complex64> {
        let p = parse_laurent(p).unwrap();
        (0..n).map(|k| p.eval_circle(k as f64 / n as f64)).collect()
    }

    #[test]
    fn numeric_examples() {
        assert_eq!(
            winding_numeric(&points("z^3", 1024), Complex64::zero()),
            Ok(3)
        );
        assert_eq!(
            winding_numeric(&points("z^(-2)", 1024), Complex64::zero()),
            Ok(-2)
        );
        assert_eq!(
            winding_numeric(&points("z^2 + 2*z^5", 1024), Complex64::zero()),
            Ok(5)
        );
        assert!(matches!(
            winding_numeric(&points("z", 64), c(1.0)),
            Err(Error::PointOnCurve { .. })
        ));
        assert!(matches!(
            winding_numeric(&points("z^3", 8), Complex64::zero()),
            Err(Error::SamplesTooSparse { .. })
        ));
    }

    #[test]
    fn argument_principle_examples() {
        let ap = |p: &str, w: Complex64| winding_argument_principle(&parse_laurent(p).unwrap(), w);
        assert_eq!(ap("z^2 + 0.5*z^5", Complex64::zero()), Ok(2));
        assert_eq!(ap("z^(-1) + 4*z^2", Complex64::zero()), Ok(2));
        assert_eq!(ap("z^3", c(5.0)), Ok(0));
        assert_eq!(ap("z^(-3)", c(0.5)), Ok(-3));
        assert_eq!(ap("3 + z", c(3.0)), Ok(1));
        assert!(matches!(ap("z^2", c(1.0)), Err(Error::PointOnCurve { .. })));
    }

    fn example() -> TwoTerm {
        TwoTerm::new(2, 5, c(1.0), c(2.0)).unwrap()
    }

    #[test]
    fn two_term_examples() {
        let speed: Speed = "1/10".parse().unwrap();
        let two = example();
        assert_eq!(two_term_winding(&two, speed, 0.0), Ok(Some(5)));
        assert_eq!(two_term_winding(&two, speed, 0.5), Ok(Some(2)));
        let profile = winding_profile(&two, speed, Some((0.0, 1.0))).unwrap();
        let t = profile.breakpoints[0];
        assert_eq!(two_term_winding(&two, speed, t), Ok(None));
        assert!((t - 0.35).abs() < 0.01);

        let z_plus_z3 = TwoTerm::new(1, 3, c(1.0), c(1.0)).unwrap();
        assert!(matches!(
            two_term_winding(&z_plus_z3, "1".parse().unwrap(), 0.25),
            Err(Error::DegeneratePoint { .. })
        ));
    }

    #[test]
    fn profile_examples() {
        let speed: Speed = "1/10".parse().unwrap();
        let profile = winding_profile(&example(), speed, Some((0.0, 1.0))).unwrap();
        assert_eq!(profile.breakpoints.len(), 2);
        assert!((profile.breakpoints[0] - 0.35).abs() < 0.01);
        assert!((profile.breakpoints[1] - 0.62).abs() < 0.01);
        assert_eq!(profile.values, [Some(5), Some(2), Some(5)]);

        let full = winding_profile(&example(), speed, None).unwrap();
        assert_eq!(full.period, 10.0);
        assert_eq!(full.values.len(), full.breakpoints.len() + 1);

        let small = TwoTerm::new(2, 5, c(1.0), c(1e-4)).unwrap();
        let profile = winding_profile(&small, speed, Some((0.0, 1.0))).unwrap();
        assert!(profile.breakpoints.is_empty());
        assert_eq!(profile.values, [Some(2)]);
        // Near the zeros of cos(4πct) the z^5 term dominates however small
        // it is.
        let profile = winding_profile(&small, speed, None).unwrap();
        assert_eq!(profile.values.len(), 9);
        assert!(profile.values.iter().step_by(2).all(|v| *v == Some(2)));
        assert!(profile
            .values
            .iter()
            .skip(1)
            .step_by(2)
            .all(|v| *v == Some(5)));
        assert!((profile.breakpoints[0] - 1.25).abs() < 1e-3);

        let one_two = TwoTerm::new(1, 2, c(1.0), c(1.0)).unwrap();
        let profile = winding_profile(&one_two, "1".parse().unwrap(), None).unwrap();
        assert!(profile
            .values
            .iter()
            .all(|v| matches!(v, Some(1) | Some(2))));
    }

    #[test]
    fn profile_breakpoints_are_origin_crossings() {
        let speed: Speed = "1/10".parse().unwrap();
        let two = example();
        let field = WaveField::new(two.polynomial(), speed).unwrap();
        let profile = winding_profile(&two, speed, None).unwrap();
        for &t in &profile.breakpoints {
            let q = field.wave_coefficients(t);
            let k = (q.coefficient(5) / q.coefficient(2)).norm();
            assert!((k - 1.0).abs() < 1e-9, "t={t} |K|={k}");
        }
    }

    #[test]
    fn negative_exponent_profile() {
        let two = TwoTerm::new(-2, 3, c(1.0), c(1.5)).unwrap();
        let speed: Speed = "1/7".parse().unwrap();
        let field = WaveField::new(two.polynomial(), speed).unwrap();
        let profile = winding_profile(&two, speed, None).unwrap();
        for (k, v) in profile.values.iter().enumerate() {
            let lo = if k == 0 {
                0.0
            } else {
                profile.breakpoints[k - 1]
            };
            let hi = profile
                .breakpoints
                .get(k)
                .copied()
                .unwrap_or(profile.period);
            let t = 0.5 * (lo + hi);
            let q = field.wave_coefficients(t);
            if !q.is_zero() {
                assert_eq!(
                    *v,
                    Some(winding_argument_principle(&q, Complex64::zero()).unwrap())
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn argument_principle_matches_numeric(
            coefficients in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..9),
            shift in -3i64..=0,
            w in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            let p = LaurentPolynomial::from_terms(
                coefficients.iter().enumerate().map(|(k, &(re, im))| (k as i64 + shift, Complex64::new(re, im))),
            );
            prop_assume!(!p.is_zero());
            let w0 = Complex64::new(w.0, w.1);
            let locator = CurveLocator::new(&p, 4096);
            prop_assume!(locator.distance(w0).0 > 1e-3);
            let expected = winding_sampled(|t| p.eval_circle(t), w0).unwrap();
            prop_assert_eq!(winding_argument_principle(&p, w0), Ok(expected));
        }

        #[test]
        fn two_term_matches_numeric(
            a in -6i64..6,
            gap in 1i64..6,
            ca in (0.2f64..3.0, 0.0f64..6.3),
            cb in (0.2f64..3.0, 0.0f64..6.3),
            speed in 0.05f64..2.0,
            t in 0.0f64..5.0,
        ) {
            let b = a + gap;
            prop_assume!(a != 0 && b != 0);
            let two = TwoTerm::new(a, b, Complex64::from_polar(ca.0, ca.1), Complex64::from_polar(cb.0, cb.1)).unwrap();
            let speed = Speed::float(speed).unwrap();
            let field = WaveField::new(two.polynomial(), speed).unwrap();
            let q = field.wave_coefficients(t);
            prop_assume!(q.len() == 2);
            let k = (q.coefficient(b) / q.coefficient(a)).norm();
            prop_assume!((k - 1.0).abs() > 1e-3);
            let expected = wave_winding(&field, t).unwrap();
            prop_assert_eq!(two_term_winding(&two, speed, t), Ok(Some(expected)));
        }
    }
}
