//! Rotations and mirror symmetries of rosette images, their group, and
//! the annulus behaviour of exponential sums with independent exponents.

mod annulus;

pub use annulus::{
    annulus_bounds, conj_symmetry_check, density_coverage, density_shard, estimate_from,
    AnnulusEstimate, CoverageMap, DensityPlan,
};

use alloc::vec::Vec;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Euclid;

use crate::error::{Error, Result};
use crate::geometry::CurveLocator;
use crate::laurent::{cis_turns, LaurentPolynomial};
use crate::numeric::poly_roots;

const MIRROR_TOL: f64 = 1e-10;
const ORBIT_TOL: f64 = 1e-8;
const MAXIMALITY_SAMPLES: usize = 8192;
const MAXIMALITY_TOL: f64 = 1e-6;
const MAX_EXTRA_ORDER: u64 = 64;

/// Isometry group of the image, as far as the coefficients reveal it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupClass {
    Trivial,
    Cyclic(u64),
    Dihedral(u64),
}

/// A reflection `p(e^{2πiβ} z̄) = e^{2πiσ} conj(p(z))`: on the circle,
/// `p(β - t) = e^{2πiσ} conj(p(t))`, and the image is symmetric about the
/// line through the origin at angle `πσ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MirrorAxis {
    pub beta: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MirrorAxes {
    pub axes: Vec<MirrorAxis>,
    /// Single-term input: the image is a circle, symmetric about every
    /// axis through its centre. `axes` then holds only the axis at `β = 0`.
    pub circle: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    /// `m`, the GCD of the exponent differences.
    pub exponent_gcd: u64,
    pub rotation_order: u64,
    pub symmetry_type: Option<(u64, u64)>,
    pub mirror_axes: Vec<MirrorAxis>,
    pub classification: GroupClass,
    /// No rotation of order up to 64 beyond the detected ones maps the
    /// sampled image onto itself.
    pub verified_maximal: bool,
}

fn require_terms(p: &LaurentPolynomial, needed: usize) -> Result<()> {
    if p.len() < needed {
        Err(Error::TooFewTerms {
            needed,
            found: p.len(),
        })
    } else {
        Ok(())
    }
}

/// GCD of all pairwise exponent differences.
pub fn exponent_gcd_m(p: &LaurentPolynomial) -> Result<u64> {
    require_terms(p, 2)?;
    let a1 = p.min_exponent().unwrap_or(0);
    Ok(p.exponents()
        .fold(0u64, |g, n| g.gcd(&(n - a1).unsigned_abs())))
}

/// `(a_1 mod m, m)` when the least exponent `a_1` is coprime to `m > 1`.
pub fn symmetry_type(p: &LaurentPolynomial) -> Result<Option<(u64, u64)>> {
    let m = exponent_gcd_m(p)?;
    let a1 = p.min_exponent().unwrap_or(0);
    let k = a1.rem_euclid(m as i64) as u64;
    Ok((m > 1 && k.gcd(&m) == 1).then_some((k, m)))
}

/// Order `m / gcd(a_1, m)` of the image rotation `e^{2πi a_1/m}`.
pub fn rotation_order(p: &LaurentPolynomial) -> Result<u64> {
    let m = exponent_gcd_m(p)?;
    let a1 = p.min_exponent().unwrap_or(0);
    Ok(m / a1.unsigned_abs().gcd(&m))
}

fn phase(c: Complex64) -> f64 {
    c.arg() / core::f64::consts::TAU
}

fn unit_interval(x: f64) -> f64 {
    let r = Euclid::rem_euclid(&x, &1.0);
    if 1.0 - r < 1e-12 || r < 1e-12 {
        0.0
    } else {
        r
    }
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = Euclid::rem_euclid(&(a - b), &1.0);
    d.min(1.0 - d)
}

/// Every reflection symmetry `(β, σ)` of `p`, one per image axis.
///
/// Candidates for `β` come from the two lowest terms; each is verified on
/// all coefficients.
pub fn mirror_axes(p: &LaurentPolynomial) -> Result<MirrorAxes> {
    require_terms(p, 1)?;
    let terms = p.terms();
    let (n1, c1) = terms[0];
    if terms.len() == 1 {
        return Ok(MirrorAxes {
            axes: alloc::vec![MirrorAxis {
                beta: 0.0,
                sigma: unit_interval(2.0 * phase(c1)),
            }],
            circle: true,
        });
    }
    let (n2, c2) = terms[1];
    let d = (n2 - n1) as f64;
    let scale = terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let mut axes: Vec<MirrorAxis> = Vec::new();
    for j in 0..(n2 - n1) {
        let beta = unit_interval((j as f64 - 2.0 * (phase(c2) - phase(c1))) / d);
        let sigma = unit_interval(2.0 * phase(c1) + n1 as f64 * beta);
        let holds = terms.iter().all(|&(n, c)| {
            let lhs = c * cis_turns(n as f64 * beta);
            let rhs = cis_turns(sigma) * c.conj();
            (lhs - rhs).norm() <= MIRROR_TOL * scale
        });
        if holds && !axes.iter().any(|a| circular_gap(a.sigma, sigma) < 1e-9) {
            axes.push(MirrorAxis { beta, sigma });
        }
    }
    axes.sort_by(|a, b| a.sigma.total_cmp(&b.sigma));
    Ok(MirrorAxes {
        axes,
        circle: false,
    })
}

/// Centroid of the sampled image weighted by arc length; every isometry
/// of the image fixes it.
fn arc_centroid(points: &[Complex64]) -> Complex64 {
    let mut total = 0.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &a) in points.iter().enumerate() {
        let b = points[(k + 1) % points.len()];
        let len = (b - a).norm();
        total += len;
        acc += (a + b) * (0.5 * len);
    }
    if total > 0.0 {
        acc / total
    } else {
        points[0]
    }
}

fn is_invariant_under_rotation(locator: &CurveLocator<'_>, centre: Complex64, turns: f64) -> bool {
    let rot = cis_turns(turns);
    locator
        .points()
        .iter()
        .all(|&z| locator.distance(centre + (z - centre) * rot).0 <= MAXIMALITY_TOL)
}

pub fn classify_group(p: &LaurentPolynomial) -> Result<SymmetryReport> {
    require_terms(p, 2)?;
    let m = exponent_gcd_m(p)?;
    let q = rotation_order(p)?;
    let mirrors = mirror_axes(p)?.axes;
    let classification = if !mirrors.is_empty() {
        GroupClass::Dihedral(q)
    } else if q >= 2 {
        GroupClass::Cyclic(q)
    } else {
        GroupClass::Trivial
    };
    let locator = CurveLocator::new(p, MAXIMALITY_SAMPLES);
    let centre = arc_centroid(locator.points());
    let verified_maximal = (2..=MAX_EXTRA_ORDER)
        .filter(|r| q % r != 0)
        .all(|r| !is_invariant_under_rotation(&locator, centre, 1.0 / r as f64));
    Ok(SymmetryReport {
        exponent_gcd: m,
        rotation_order: q,
        symmetry_type: symmetry_type(p)?,
        mirror_axes: mirrors,
        classification,
        verified_maximal,
    })
}

fn same_multiset(a: &[Complex64], b: &[Complex64]) -> bool {
    let mut used = alloc::vec![false; b.len()];
    a.len() == b.len()
        && a.iter().all(|&z| {
            let tol = ORBIT_TOL * z.norm().max(1.0);
            let found = b
                .iter()
                .enumerate()
                .filter(|(k, w)| !used[*k] && (z - **w).norm() <= tol)
                .min_by(|x, y| (z - *x.1).norm().total_cmp(&(z - *y.1).norm()));
            match found {
                Some((k, _)) => {
                    used[k] = true;
                    true
                }
                None => false,
            }
        })
}

/// Checks that the domain maps behind the report's symmetries permute the
/// zeros of `p`: the rotation by `1/m` turns with `m` the reported exponent
/// GCD, and `z ↦ e^{2πiβ} z̄` for each mirror. A zero or pole at the origin
/// is fixed by all of them.
pub fn zero_pole_orbit_check(p: &LaurentPolynomial, report: &SymmetryReport) -> Result<bool> {
    require_terms(p, 2)?;
    let (_, dense) = p.dense_coefficients();
    let roots = poly_roots(&dense)?;
    let zeros = roots.roots();
    let mut maps: Vec<(Complex64, bool)> = Vec::new();
    if report.exponent_gcd > 1 {
        maps.push((cis_turns(1.0 / report.exponent_gcd as f64), false));
    }
    maps.extend(report.mirror_axes.iter().map(|a| (cis_turns(a.beta), true)));
    Ok(maps.iter().all(|&(u, conjugate)| {
        let image: Vec<Complex64> = zeros
            .iter()
            .map(|&z| u * if conjugate { z.conj() } else { z })
            .collect();
        same_multiset(&image, zeros)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_laurent;

    fn parse(s: &str) -> LaurentPolynomial {
        parse_laurent(s).unwrap()
    }

    #[test]
    fn exponent_gcds() {
        assert_eq!(exponent_gcd_m(&parse("z^2 + z^7 + z^12")).unwrap(), 5);
        assert_eq!(exponent_gcd_m(&parse("z^(-1) + z^3")).unwrap(), 4);
        assert_eq!(exponent_gcd_m(&parse("z^5 + z^10 + z^15")).unwrap(), 5);
        assert!(matches!(
            exponent_gcd_m(&parse("z")),
            Err(Error::TooFewTerms { .. })
        ));
    }

    #[test]
    fn types_and_orders() {
        assert_eq!(
            symmetry_type(&parse("z^2 + z^7 + z^12")).unwrap(),
            Some((2, 5))
        );
        assert_eq!(
            symmetry_type(&parse("(z^3 - z^(-1))/(2i)")).unwrap(),
            Some((3, 4))
        );
        assert_eq!(symmetry_type(&parse("z^5 + z^10 + z^15")).unwrap(), None);
        assert_eq!(rotation_order(&parse("z^2 + z^7 + z^12")).unwrap(), 5);
        assert_eq!(rotation_order(&parse("z^5 + z^10 + z^15")).unwrap(), 1);
        assert_eq!(rotation_order(&parse("z^(-1) + z^3")).unwrap(), 4);
        assert_eq!(rotation_order(&parse("1 + z^5")).unwrap(), 1);
    }

    #[test]
    fn mirrors() {
        let real = mirror_axes(&parse("z^2 + z^7 + z^12")).unwrap();
        assert_eq!(real.axes.len(), 5);
        assert!(real.axes.iter().any(|a| a.beta == 0.0 && a.sigma == 0.0));
        assert!(mirror_axes(&parse("2*z^2 - 2i*z^7 + i*z^12"))
            .unwrap()
            .axes
            .is_empty());
        let circle = mirror_axes(&parse("2i*z^3")).unwrap();
        assert!(circle.circle);
        assert!((circle.axes[0].sigma - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mirror_identity_holds() {
        for text in [
            "z^2 + z^7 + z^12",
            "(z^3 - z^(-1))/(2i)",
            "i*z + (1+i)*z^4",
            "z*(z - 1/2)*(z - i)",
        ] {
            let p = parse(text);
            for axis in mirror_axes(&p).unwrap().axes {
                for j in 0..256 {
                    let t = j as f64 / 256.0;
                    let lhs = p.eval_circle(axis.beta - t);
                    let rhs = cis_turns(axis.sigma) * p.eval_circle(t).conj();
                    assert!((lhs - rhs).norm() < 1e-10, "{text}");
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let r = classify_group(&parse("z^2 + z^7 + z^12")).unwrap();
        assert_eq!(r.classification, GroupClass::Dihedral(5));
        assert!(r.verified_maximal);
        let r = classify_group(&parse("2*z^2 - 2i*z^7 + i*z^12")).unwrap();
        assert_eq!(r.classification, GroupClass::Cyclic(5));
        let r = classify_group(&parse("z*(z - 1/2)*(z - i)")).unwrap();
        assert_eq!(r.classification, GroupClass::Trivial);
        assert!(r.verified_maximal);
    }

    #[test]
    fn hidden_rotation_is_flagged() {
        // Exponents {0, 3} give q = 1, yet the image of 1 + z^3 is a circle
        // about 1 and so invariant under every rotation about its centre.
        let r = classify_group(&parse("1 + z^3")).unwrap();
        assert_eq!(r.rotation_order, 1);
        assert!(!r.verified_maximal);
    }

    #[test]
    fn orbit_checks() {
        let p = parse("z^2 + z^7 + z^12");
        let report = classify_group(&p).unwrap();
        assert!(zero_pole_orbit_check(&p, &report).unwrap());

        let asym = parse("z*(z - 1/2)*(z - i)");
        let report_trivial = classify_group(&asym).unwrap();
        assert!(zero_pole_orbit_check(&asym, &report_trivial).unwrap());

        let mut wrong = report.clone();
        wrong.exponent_gcd = 3;
        wrong.mirror_axes.clear();
        assert!(!zero_pole_orbit_check(&p, &wrong).unwrap());

        let rose = parse("(z^3 - z^(-1))/(2i)");
        assert!(zero_pole_orbit_check(&rose, &classify_group(&rose).unwrap()).unwrap());
    }

    #[test]
    fn functional_symmetry_identity() {
        for text in [
            "z^2 + z^7 + z^12",
            "2*z^2 - 2i*z^7 + i*z^12",
            "(z^3 - z^(-1))/(2i)",
        ] {
            let p = parse(text);
            let (k, m) = symmetry_type(&p).unwrap().unwrap();
            for j in 0..1024 {
                let t = j as f64 / 1024.0;
                let lhs = p.eval_circle(t + 1.0 / m as f64);
                let rhs = cis_turns(k as f64 / m as f64) * p.eval_circle(t);
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }
}
