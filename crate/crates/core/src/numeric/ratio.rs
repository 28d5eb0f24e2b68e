//! The ratio functions `ψ(θ) = sin(2πaθ)/sin(2πbθ)` and
//! `φ(t) = cos(2πbct)/cos(2πact)`, extended by their two-sided limits where
//! numerator and denominator vanish together. Zeros of the denominator
//! alone give `±∞`, signed as the limit from the right.

use num_traits::Float;

use crate::laurent::cis_turns;

/// Relative tolerance for deciding that a product like `2bθ` is an integer.
const SNAP: f64 = 1e-12;

fn nearest_integer(x: f64) -> Option<i64> {
    let k = Float::round(x);
    ((x - k).abs() <= SNAP * x.abs().max(1.0)).then_some(k as i64)
}

fn sign_power(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn psi(a: u64, b: u64, theta: f64) -> f64 {
    let (a_f, b_f) = (a as f64, b as f64);
    let num = cis_turns(a_f * theta).im;
    // sin(2πbθ) = 0 exactly at θ_k = k/(2b).
    let Some(k) = nearest_integer(2.0 * b_f * theta) else {
        return num / cis_turns(b_f * theta).im;
    };
    let ak = i128::from(a) * i128::from(k);
    let b_wide = i128::from(b);
    if ak % b_wide == 0 {
        // sin(πak/b)/sin(πk) → (a/b)·cos(πak/b)/cos(πk)
        let q = (ak / b_wide) as i64;
        (a_f / b_f) * sign_power(q) * sign_power(k)
    } else {
        // Right-hand limit: the denominator behaves like 2πb(θ-θ_k)·cos(πk).
        f64::INFINITY * num.signum() * sign_power(k)
    }
}

pub fn phi(a: u64, b: u64, c: f64, t: f64) -> f64 {
    let (a_f, b_f) = (a as f64, b as f64);
    let num = cis_turns(b_f * c * t).re;
    // cos(2πact) = 0 exactly when 4act is an odd integer j = 2k+1.
    let Some(j) = nearest_integer(4.0 * a_f * c * t).filter(|j| j.rem_euclid(2) == 1) else {
        return num / cis_turns(a_f * c * t).re;
    };
    let bj = i128::from(b) * i128::from(j);
    let a_wide = i128::from(a);
    let half_turns = (j - 1).div_euclid(2);
    if bj % a_wide == 0 && (bj / a_wide).rem_euclid(2) == 1 {
        // m = bj/a odd: cos(πm/2)/cos(πj/2) → (b/a)·sin(πm/2)/sin(πj/2)
        let m = (bj / a_wide) as i64;
        (b_f / a_f) * sign_power((m - 1).div_euclid(2)) * sign_power(half_turns)
    } else {
        // Right-hand limit: the denominator behaves like -2πac(t-t_k)·sin(πj/2).
        -f64::INFINITY * num.signum() * sign_power(half_turns)
    }
}
