use alloc::vec::Vec;

use super::{derivative_coefficients, horner, trim};

const GRID: usize = 2048;
const DEDUPE: f64 = 1e-10;
const TANGENT: f64 = 1e-10;
/// Rounding noise around a multiple root produces spurious sign changes
/// within about the square root of machine epsilon.
const MULTIPLE_ROOT_SPREAD: f64 = 1e-7;

fn scale_at(coefficients: &[f64], x: f64) -> f64 {
    let r = x.abs();
    coefficients
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * r + c.abs())
}

fn bisect(coefficients: &[f64], mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_negative = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = horner(coefficients, mid);
        if f == 0.0 {
            return mid;
        }
        if (f < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All real roots of the polynomial in the open interval `(lo, hi)`,
/// ascending.
///
/// Odd-multiplicity roots are found by sign changes between breakpoints (a
/// uniform grid merged with the critical points); even-multiplicity roots
/// show up as critical points where the value nearly vanishes.
pub fn real_roots(coefficients: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let coefficients = trim(coefficients);
    if coefficients.len() < 2 || lo.is_nan() || hi.is_nan() || lo >= hi {
        return Vec::new();
    }
    let derivative = derivative_coefficients(coefficients);
    let critical = real_roots(&derivative, lo, hi);
    let mut breakpoints: Vec<f64> = (0..=GRID)
        .map(|k| lo + (hi - lo) * k as f64 / GRID as f64)
        .chain(critical.iter().copied())
        .collect();
    breakpoints.sort_by(f64::total_cmp);

    let mut roots = Vec::new();
    let mut prev = (breakpoints[0], horner(coefficients, breakpoints[0]));
    for &x in &breakpoints[1..] {
        let f = horner(coefficients, x);
        if f == 0.0 {
            roots.push(x);
        } else if prev.1 != 0.0 && (prev.1 < 0.0) != (f < 0.0) {
            roots.push(bisect(coefficients, prev.0, x, prev.1));
        }
        prev = (x, f);
    }
    for &x in &critical {
        if horner(coefficients, x).abs() <= TANGENT * scale_at(coefficients, x) {
            roots.retain(|&r| (r - x).abs() > MULTIPLE_ROOT_SPREAD * x.abs().max(1.0));
            roots.push(x);
        }
    }
    roots.retain(|&x| lo < x && x < hi);
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() <= DEDUPE * a.abs().max(1.0));
    roots
}
