use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures of the numeric and analysis operations.
///
/// Parse failures are reported separately as
/// [`ParseDiagnostic`](crate::ParseDiagnostic).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("evaluation at z = 0 with a negative exponent present")]
    PoleAtZero,
    #[error("the zero polynomial is not a valid input")]
    ZeroPolynomial,
    #[error("operation needs at least {needed} terms, got {found}")]
    TooFewTerms { needed: usize, found: usize },
    #[error("negative exponent {0} not supported by this operation")]
    NegativeExponent(i64),
    #[error("polynomial degree {found} is below the required {needed}")]
    DegreeTooLow { needed: usize, found: usize },
    #[error("polynomial degree {0} exceeds the supported maximum")]
    DegreeTooHigh(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("root finder failed to converge")]
    RootFinding,
    #[error("point lies on or too close to the curve (distance {distance:e})")]
    PointOnCurve { distance: f64 },
    #[error("samples too sparse: angular step {step} exceeds pi/2, resample")]
    SamplesTooSparse { step: f64 },
    #[error("root with modulus {modulus} is too close to the unit circle")]
    BoundaryAmbiguous { modulus: f64 },
    #[error("curve degenerates to a single point at t = {t}")]
    DegeneratePoint { t: f64 },
    #[error("t = {t} is a degenerate time of the wave flow")]
    DegenerateTime { t: f64 },
    #[error("rational independence of the exponents cannot be decided")]
    IndependenceUnknown,
    #[error("exponents are rationally dependent")]
    ExponentsDependent,
    #[error("periodicity cannot be decided for unasserted float exponents")]
    Indeterminate,
    #[error("ambiguous root filtering: residual {residual:e} between thresholds")]
    AmbiguousFilter { residual: f64 },
    #[error("found {count} self-intersections, above the bound {bound}")]
    IntersectionBound { count: usize, bound: usize },
    #[error("interpolant degree exceeds the bound {bound}")]
    InterpolationDegree { bound: usize },
}
