//! Weighted sums of exponentials `γ(t) = Σ w_k e^{2πi a_k t}` with real
//! exponents that are rational, rational multiples of a square root, or
//! plain floats.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{CheckedMul, Float, Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::cis_turns;

/// A real number in one of the forms whose rational relations can be
/// decided exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExactReal {
    Rational(Rational64),
    /// `coeff · √radicand` with `radicand > 1` square-free and `coeff ≠ 0`.
    Surd {
        coeff: Rational64,
        radicand: u64,
    },
    /// A float about which nothing is known, unless the caller asserts it is
    /// rationally independent of every other exponent.
    Opaque {
        value: f64,
        independent: bool,
    },
}

/// Splits `k` into `s² · r` with `r` square-free.
pub(crate) fn square_free_split(k: u64) -> (u64, u64) {
    let mut outer = 1u64;
    let mut rest = k;
    let mut f = 2u64;
    while f.saturating_mul(f) <= rest {
        while rest % (f * f) == 0 {
            rest /= f * f;
            outer *= f;
        }
        f += 1;
    }
    (outer, rest)
}

impl ExactReal {
    pub fn integer(n: i64) -> Self {
        ExactReal::Rational(Rational64::from_integer(n))
    }

    pub fn rational(numer: i64, denom: i64) -> Self {
        ExactReal::Rational(Rational64::new(numer, denom))
    }

    /// `coeff · √k`, normalized so that the radicand is square-free.
    /// Perfect squares collapse to rationals. Returns `None` on overflow.
    pub fn surd(coeff: Rational64, k: u64) -> Option<Self> {
        if k == 0 || coeff.is_zero() {
            return Some(ExactReal::Rational(Rational64::zero()));
        }
        let (outer, radicand) = square_free_split(k);
        let outer = i64::try_from(outer).ok()?;
        let coeff = coeff.checked_mul(&Rational64::from_integer(outer))?;
        Some(if radicand == 1 {
            ExactReal::Rational(coeff)
        } else {
            ExactReal::Surd { coeff, radicand }
        })
    }

    pub fn opaque(value: f64) -> Self {
        ExactReal::Opaque {
            value,
            independent: false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            ExactReal::Rational(r) => ratio_to_f64(r),
            ExactReal::Surd { coeff, radicand } => {
                ratio_to_f64(coeff) * Float::sqrt(radicand as f64)
            }
            ExactReal::Opaque { value, .. } => value,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            ExactReal::Rational(r) => r.is_zero(),
            ExactReal::Surd { .. } => false,
            ExactReal::Opaque { value, .. } => value == 0.0,
        }
    }

    pub fn as_rational(&self) -> Option<Rational64> {
        match *self {
            ExactReal::Rational(r) => Some(r),
            _ => None,
        }
    }

    fn same_value(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactReal::Opaque { value: a, .. }, ExactReal::Opaque { value: b, .. }) => a == b,
            (ExactReal::Opaque { .. }, _) | (_, ExactReal::Opaque { .. }) => false,
            _ => self == other,
        }
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactReal::Rational(a), ExactReal::Rational(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExactReal::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ExactReal::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ExactReal::Surd { coeff, radicand } => {
                if coeff == Rational64::from_integer(1) {
                    write!(f, "sqrt({radicand})")
                } else if coeff == Rational64::from_integer(-1) {
                    write!(f, "-sqrt({radicand})")
                } else if coeff.is_integer() {
                    write!(f, "{}*sqrt({radicand})", coeff.numer())
                } else {
                    write!(f, "{}*sqrt({radicand})/{}", coeff.numer(), coeff.denom())
                }
            }
            ExactReal::Opaque { value, .. } => write!(f, "{value}"),
        }
    }
}

pub(crate) fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `Σ w_k e^{2πi a_k t}` with strictly increasing exponents and nonzero
/// weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentialSum {
    terms: Vec<(Complex64, ExactReal)>,
}

impl ExponentialSum {
    /// Sorts the terms and merges equal exponents. Zero weights, including
    /// weights that cancel after merging, are rejected.
    pub fn new(mut terms: Vec<(Complex64, ExactReal)>) -> Result<Self> {
        if terms.iter().any(|(w, _)| w.is_zero()) {
            return Err(Error::InvalidArgument("zero weight in exponential sum"));
        }
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut merged: Vec<(Complex64, ExactReal)> = Vec::with_capacity(terms.len());
        for (w, a) in terms {
            match merged.last_mut() {
                Some((acc, b)) if b.same_value(&a) => *acc += w,
                Some((_, b)) if b.to_f64() == a.to_f64() => {
                    return Err(Error::InvalidArgument("indistinguishable exponents"));
                }
                _ => merged.push((w, a)),
            }
        }
        if merged.iter().any(|(w, _)| w.is_zero()) {
            return Err(Error::InvalidArgument("weights cancel to zero"));
        }
        Ok(Self { terms: merged })
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<(Complex64, ExactReal)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(Complex64, ExactReal)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    /// Marks every float exponent as rationally independent of the others.
    pub fn assert_independent(&mut self) {
        for (_, a) in &mut self.terms {
            if let ExactReal::Opaque { independent, .. } = a {
                *independent = true;
            }
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |acc, (w, a)| {
            acc + w * cis_turns(a.to_f64() * t)
        })
    }

    /// Bound on `|γ'(t)|`.
    pub fn speed_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|(w, a)| core::f64::consts::TAU * w.norm() * a.to_f64().abs())
            .sum()
    }

    /// The smallest `T > 0` with every `a_k T` an integer, if the exponents
    /// span a one-dimensional rational space. Zero exponents are ignored; a
    /// constant sum has no fundamental period and yields `None`.
    pub fn periodicity_check(&self) -> Result<Option<ExactReal>> {
        let nonzero: Vec<&ExactReal> = self
            .terms
            .iter()
            .map(|(_, a)| a)
            .filter(|a| !a.is_zero())
            .collect();
        match nonzero.as_slice() {
            [] => return Ok(None),
            [single] => return Ok(Some(reciprocal_abs(single))),
            _ => {}
        }
        if nonzero
            .iter()
            .any(|a| matches!(a, ExactReal::Opaque { .. }))
        {
            let asserted = nonzero.iter().any(|a| {
                matches!(
                    a,
                    ExactReal::Opaque {
                        independent: true,
                        ..
                    }
                )
            });
            return if asserted {
                Ok(None)
            } else {
                Err(Error::Indeterminate)
            };
        }
        let mut radicand = None;
        let mut coeffs = Vec::with_capacity(nonzero.len());
        for a in &nonzero {
            let (c, k) = match **a {
                ExactReal::Rational(r) => (r, 1u64),
                ExactReal::Surd { coeff, radicand } => (coeff, radicand),
                ExactReal::Opaque { .. } => unreachable!(),
            };
            match radicand {
                None => radicand = Some(k),
                Some(prev) if prev != k => return Ok(None),
                _ => {}
            }
            coeffs.push(c.abs());
        }
        // a_k = r_k √k: T = lcm(denominators) / (gcd(numerators) √k).
        let lcm_den = coeffs.iter().fold(1i64, |l, r| l.lcm(r.denom()));
        let gcd_num = coeffs.iter().fold(0i64, |g, r| g.gcd(r.numer()));
        let base = Rational64::new(lcm_den, gcd_num);
        let k = radicand.unwrap_or(1);
        Ok(Some(if k == 1 {
            ExactReal::Rational(base)
        } else {
            ExactReal::Surd {
                coeff: base / Rational64::from_integer(k as i64),
                radicand: k,
            }
        }))
    }

    /// Whether the exponents are linearly independent over the rationals.
    ///
    /// Decided exactly for rational and surd exponents: distinct square-free
    /// radicands (with 1 for the rationals) are independent, two exponents
    /// sharing a radicand are not, and a zero exponent never is. Float
    /// exponents count as independent only when asserted.
    pub fn rational_independence(&self) -> Result<bool> {
        let mut seen: Vec<u64> = Vec::new();
        let mut unknown = false;
        for (_, a) in &self.terms {
            match *a {
                _ if a.is_zero() => return Ok(false),
                ExactReal::Rational(_) | ExactReal::Surd { .. } => {
                    let k = match *a {
                        ExactReal::Surd { radicand, .. } => radicand,
                        _ => 1,
                    };
                    if seen.contains(&k) {
                        return Ok(false);
                    }
                    seen.push(k);
                }
                ExactReal::Opaque { independent, .. } => unknown |= !independent,
            }
        }
        if unknown {
            Err(Error::IndependenceUnknown)
        } else {
            Ok(true)
        }
    }
}

fn reciprocal_abs(a: &ExactReal) -> ExactReal {
    match *a {
        ExactReal::Rational(r) => ExactReal::Rational(r.abs().recip()),
        // 1/(r√k) = √k / (r k)
        ExactReal::Surd { coeff, radicand } => ExactReal::Surd {
            coeff: (coeff.abs() * Rational64::from_integer(radicand as i64)).recip(),
            radicand,
        },
        ExactReal::Opaque { value, independent } => ExactReal::Opaque {
            value: 1.0 / value.abs(),
            independent,
        },
    }
}
