//! Analysis of rosette curves: images of the unit circle under Laurent
//! polynomials and of the real line under exponential sums.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! computation; IO, rendering and the command line live in `rosette-cli`.
//!
//! The main entry points:
//!
//! * [`LaurentPolynomial`] and [`ExponentialSum`] with the expression
//!   [`parser`] that builds them from text like `"z^2 + z^7 + z^12"`.
//! * [`symmetry`]: rotation order, symmetry type, mirror axes, group
//!   classification, and annulus density for irrational exponents.
//! * [`winding`]: winding numbers by angle tracking, by the argument
//!   principle, and in closed form along the two-term wave flow.
//! * [`wave`]: the zero-velocity wave evolution of a curve, its period and
//!   its special times.
//! * [`selfint`]: self-intersections through the Dieudonné polynomial,
//!   cusps and point multiplicities.
//! * [`variety`]: pointwise evaluation of the implicit curve containing
//!   the image.
//!
//! ```
//! use rosette_core::{parser, symmetry::{classify_group, GroupClass}};
//!
//! let p = parser::parse_laurent("z^2 + z^7 + z^12").unwrap();
//! let report = classify_group(&p).unwrap();
//! assert_eq!(report.classification, GroupClass::Dihedral(5));
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod expsum;
pub mod geometry;
pub mod laurent;
pub mod numeric;
pub mod parser;
pub mod selfint;
pub mod symmetry;
pub mod variety;
pub mod wave;
pub mod winding;

pub use error::{Error, Result};
pub use expsum::{ExactReal, ExponentialSum};
pub use laurent::{cis_turns, CurveSample, LaurentPolynomial};
pub use num_complex::Complex64;
pub use parser::ParseDiagnostic;
