//! Evolution of a curve under the wave equation with zero initial
//! velocity: `u(x, t) = Σ c_n cos(2πnct) e^{2πinx}`.

use alloc::vec::Vec;
use core::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{CheckedMul, Float, Zero};

use crate::error::{Error, Result};
use crate::expsum::ratio_to_f64;
use crate::laurent::{cis_turns, cos_turns, LaurentPolynomial};
use crate::winding::{crossing_times, winding_profile};

const DEDUPE: f64 = 1e-10;

/// A wave speed, exact when it was given as a rational.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Speed {
    value: f64,
    exact: Option<Rational64>,
}

impl Speed {
    pub fn rational(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 || numer == 0 || (numer < 0) != (denom < 0) {
            return Err(Error::InvalidArgument("speed must be positive"));
        }
        let r = Rational64::new(numer, denom);
        Ok(Self {
            value: ratio_to_f64(r),
            exact: Some(r),
        })
    }

    pub fn float(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidArgument("speed must be positive"));
        }
        Ok(Self { value, exact: None })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Rational64> {
        self.exact
    }

    /// `n c t` in turns, computed with the integer part first when `c` is
    /// exact so that quarter turns come out exactly for simple `t`.
    fn turns(&self, n: i64, t: f64) -> f64 {
        match self.exact {
            Some(r) => (n as f64 * *r.numer() as f64) * t / *r.denom() as f64,
            None => n as f64 * self.value * t,
        }
    }
}

impl FromStr for Speed {
    type Err = Error;

    /// Accepts `p/q`, integers and decimals (kept exact), or any float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument("malformed speed"))?;
            let d: i64 = d
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument("malformed speed"))?;
            return Self::rational(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits_only =
            !int.is_empty() && int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit());
        if digits_only && frac.len() <= 15 {
            if let Ok(numer) = alloc::format!("{int}{frac}").parse::<i64>() {
                return Self::rational(numer, 10i64.pow(frac.len() as u32));
            }
        }
        let value: f64 = s
            .parse()
            .map_err(|_| Error::InvalidArgument("malformed speed"))?;
        Self::float(value)
    }
}

/// `cos(2πu)`, snapped to exactly zero within rounding of an odd quarter
/// turn.
fn cos_snapped(u: f64) -> f64 {
    let q = 4.0 * u;
    let k = Float::round(q);
    if (q - k).abs() <= 1e-12 * q.abs().max(1.0) && (k as i64).rem_euclid(2) == 1 {
        0.0
    } else {
        cos_turns(u)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveField {
    base: LaurentPolynomial,
    speed: Speed,
    period: Option<f64>,
    period_exact: Option<Rational64>,
}

impl WaveField {
    pub fn new(base: LaurentPolynomial, speed: Speed) -> Result<Self> {
        if base.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = base.exponent_gcd();
        let (period, period_exact) = if g == 0 {
            (None, None)
        } else {
            let exact = speed
                .exact
                .and_then(|c| c.checked_mul(&Rational64::from_integer(g as i64)))
                .map(|x| x.recip());
            let value = exact.map_or(1.0 / (speed.value * g as f64), ratio_to_f64);
            (Some(value), exact)
        };
        Ok(Self {
            base,
            speed,
            period,
            period_exact,
        })
    }

    pub fn base(&self) -> &LaurentPolynomial {
        &self.base
    }

    pub fn speed(&self) -> Speed {
        self.speed
    }

    /// `T = 1/(c · gcd{|n|})`; `None` for a constant curve, which never
    /// moves.
    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn period_exact(&self) -> Option<Rational64> {
        self.period_exact
    }

    fn factor(&self, n: i64, t: f64) -> f64 {
        cos_snapped(self.speed.turns(n, t))
    }

    /// The curve at time `t`; terms whose factor vanishes are dropped, so
    /// the result can be the zero polynomial.
    pub fn wave_coefficients(&self, t: f64) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            self.base
                .terms()
                .iter()
                .map(|&(n, c)| (n, c * self.factor(n, t))),
        )
    }

    /// `u(x, t)`.
    pub fn wave_eval(&self, x: f64, t: f64) -> Complex64 {
        self.base
            .terms()
            .iter()
            .fold(Complex64::zero(), |acc, &(n, c)| {
                acc + c * self.factor(n, t) * cis_turns(n as f64 * x)
            })
    }

    /// Times in `[0, T]` where at most one non-constant term survives.
    pub fn degenerate_times(&self) -> DegenerateTimes {
        let moving: Vec<i64> = self.base.exponents().filter(|&n| n != 0).collect();
        let always = moving.len() <= 1;
        let Some(period) = self.period else {
            return DegenerateTimes {
                always_degenerate: true,
                events: Vec::new(),
            };
        };
        let mut candidates: Vec<(f64, Option<Rational64>)> = Vec::new();
        for &n in &moving {
            // cos(2π|n|ct) = 0 at t = (2k+1)/(4|n|c)
            let n_abs = n.abs();
            let mut k = 0i64;
            loop {
                let exact = self.speed.exact.and_then(|c| {
                    let denom = c.checked_mul(&Rational64::from_integer(4 * n_abs))?;
                    Some(Rational64::from_integer(2 * k + 1) / denom)
                });
                let t = exact.map_or(
                    (2 * k + 1) as f64 / (4.0 * n_abs as f64 * self.speed.value),
                    ratio_to_f64,
                );
                if t > period + DEDUPE {
                    break;
                }
                candidates.push((t, exact));
                k += 1;
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
        candidates.dedup_by(|b, a| (b.0 - a.0).abs() <= DEDUPE);
        let events = candidates
            .into_iter()
            .filter_map(|(t, exact)| {
                let survivors: Vec<i64> = moving
                    .iter()
                    .copied()
                    .filter(|&n| self.factor(n, t) != 0.0)
                    .collect();
                let kind = match survivors.as_slice() {
                    [] => EventKind::DegeneratePoint,
                    [n] => EventKind::DegenerateCircle { exponent: *n },
                    _ => return None,
                };
                Some(TimelineEvent { t, exact, kind })
            })
            .collect();
        DegenerateTimes {
            always_degenerate: always,
            events,
        }
    }

    /// `frames` curves at `t_j = jT/frames`, each sampled at `samples`
    /// uniform parameters.
    pub fn snapshots(&self, frames: usize, samples: usize) -> Result<Vec<Snapshot>> {
        if frames == 0 || samples < 2 {
            return Err(Error::InvalidArgument(
                "need at least one frame and two samples",
            ));
        }
        let period = self.period.unwrap_or(0.0);
        Ok((0..frames)
            .map(|j| {
                let t = period * j as f64 / frames as f64;
                let points = (0..samples)
                    .map(|k| self.wave_eval(k as f64 / samples as f64, t))
                    .collect();
                Snapshot { t, points }
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub points: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateTimes {
    /// At most one moving term: every time is degenerate.
    pub always_degenerate: bool,
    pub events: Vec<TimelineEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EventKind {
    /// Only the term `z^exponent` (plus any constant) survives.
    DegenerateCircle { exponent: i64 },
    /// No moving term survives.
    DegeneratePoint,
    /// The curve crosses the origin; `winding` holds afterwards.
    WindingTransition { winding: Option<i64> },
    /// A cusp forms: `|φ(t)| = (|c_a|/|c_b|)(a/b)`.
    CuspTime { threshold: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimelineEvent {
    pub t: f64,
    /// The time as an exact rational, when the speed is one.
    pub exact: Option<Rational64>,
    pub kind: EventKind,
}

/// Two-term wave `c_a z^a + c_b z^b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoTerm {
    pub a: i64,
    pub b: i64,
    pub c_a: Complex64,
    pub c_b: Complex64,
}

impl TwoTerm {
    pub fn new(a: i64, b: i64, c_a: Complex64, c_b: Complex64) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidArgument("two-term exponents need a < b"));
        }
        if c_a.is_zero() || c_b.is_zero() {
            return Err(Error::InvalidArgument(
                "two-term coefficients must be nonzero",
            ));
        }
        Ok(Self { a, b, c_a, c_b })
    }

    /// Reads a polynomial with exactly two terms.
    pub fn from_polynomial(p: &LaurentPolynomial) -> Result<Self> {
        match p.terms() {
            [(a, c_a), (b, c_b)] => Self::new(*a, *b, *c_a, *c_b),
            terms => Err(Error::TooFewTerms {
                needed: 2,
                found: terms.len(),
            }),
        }
    }

    pub fn polynomial(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms([(self.a, self.c_a), (self.b, self.c_b)])
    }
}

/// Winding transitions, cusp times and degenerate times of a two-term wave
/// in `window` (default `[0, T]`), sorted by time.
pub fn timeline(
    two: &TwoTerm,
    speed: Speed,
    window: Option<(f64, f64)>,
) -> Result<Vec<TimelineEvent>> {
    let field = WaveField::new(two.polynomial(), speed)?;
    let period = field
        .period()
        .ok_or(Error::InvalidArgument("constant wave"))?;
    let (lo, hi) = window.unwrap_or((0.0, period));
    let profile = winding_profile(two, speed, Some((lo, hi)))?;
    let mut events: Vec<TimelineEvent> = profile
        .breakpoints
        .iter()
        .enumerate()
        .map(|(k, &t)| TimelineEvent {
            t,
            exact: None,
            kind: EventKind::WindingTransition {
                winding: profile.values[k + 1],
            },
        })
        .collect();
    let (a, b) = (two.a.unsigned_abs(), two.b.unsigned_abs());
    let threshold = (two.c_a.norm() / two.c_b.norm()) * (a as f64 / b as f64);
    for (t, _) in crossing_times(
        a,
        a as f64 * two.c_a.norm(),
        b,
        b as f64 * two.c_b.norm(),
        speed.value(),
        lo,
        hi,
    ) {
        events.push(TimelineEvent {
            t,
            exact: None,
            kind: EventKind::CuspTime { threshold },
        });
    }
    // Degenerate times repeat with the period.
    let degenerate = field.degenerate_times().events;
    let first_cycle = Float::floor(lo / period) as i64;
    let last_cycle = Float::ceil(hi / period) as i64;
    for cycle in first_cycle..=last_cycle {
        for e in &degenerate {
            let t = e.t + cycle as f64 * period;
            if t >= lo - DEDUPE && t <= hi + DEDUPE {
                let exact = if cycle == 0 { e.exact } else { None };
                events.push(TimelineEvent { t, exact, ..*e });
            }
        }
    }
    events.sort_by(|x, y| {
        x.t.total_cmp(&y.t)
            .then(kind_rank(&x.kind).cmp(&kind_rank(&y.kind)))
    });
    events.dedup_by(|y, x| (y.t - x.t).abs() <= DEDUPE && kind_rank(&x.kind) == kind_rank(&y.kind));
    Ok(events)
}

fn kind_rank(kind: &EventKind) -> u8 {
    match kind {
        EventKind::DegenerateCircle { .. } => 0,
        EventKind::DegeneratePoint => 1,
        EventKind::WindingTransition { .. } => 2,
        EventKind::CuspTime { .. } => 3,
    }
}
