//! The JSON report: one versioned schema shared by every subcommand, each
//! filling the sections it computes.

use std::fmt;

use rosette_core::Complex64;
use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};

use rosette_core::selfint::{Cusp, Multiplicity, SelfIntersections};
use rosette_core::symmetry::{GroupClass, SymmetryReport};
use rosette_core::wave::{EventKind, TimelineEvent};
use rosette_core::winding::WindingProfile;

pub const SCHEMA_VERSION: u32 = 1;

/// A float that refuses to serialize unless finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            Err(S::Error::custom(NonFinite(self.0)))
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Num)
    }
}

#[derive(Debug)]
struct NonFinite(f64);

impl fmt::Display for NonFinite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "non-finite number {} in report", self.0)
    }
}

fn nums(values: &[f64]) -> Vec<Num> {
    values.iter().copied().map(Num).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub re: Num,
    pub im: Num,
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Self {
            re: Num(z.re),
            im: Num(z.im),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: String,
    pub input: String,
    /// The parsed expression printed back in the input grammar.
    pub normalized: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetrySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winding: Option<WindingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cusps: Option<Vec<CuspEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_intersections: Option<SelfIntersectionSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub multiplicities: Vec<MultiplicityEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave: Option<WaveSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annulus: Option<AnnulusSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety: Option<VarietySection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: &str, normalized: String, kind: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: Tool {
                name: env!("CARGO_PKG_NAME").to_owned(),
                version: env!("CARGO_PKG_VERSION").to_owned(),
            },
            command: command.to_owned(),
            input: input.to_owned(),
            normalized,
            kind: kind.to_owned(),
            symmetry: None,
            winding: None,
            cusps: None,
            self_intersections: None,
            multiplicities: Vec::new(),
            wave: None,
            annulus: None,
            variety: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: String,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisEntry {
    pub beta: Num,
    pub sigma: Num,
    /// Angle of the fixed line in radians, `πσ`.
    pub angle: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetrySection {
    pub exponent_gcd: u64,
    pub rotation_order: u64,
    pub symmetry_type: Option<[u64; 2]>,
    pub mirror_axes: Vec<AxisEntry>,
    pub classification: Classification,
    pub verified_maximal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_pole_orbits: Option<bool>,
}

impl SymmetrySection {
    pub fn from_report(r: &SymmetryReport, zero_pole_orbits: Option<bool>) -> Self {
        let (kind, order) = match r.classification {
            GroupClass::Trivial => ("trivial", 1),
            GroupClass::Cyclic(m) => ("cyclic", m),
            GroupClass::Dihedral(m) => ("dihedral", m),
        };
        Self {
            exponent_gcd: r.exponent_gcd,
            rotation_order: r.rotation_order,
            symmetry_type: r.symmetry_type.map(|(k, m)| [k, m]),
            mirror_axes: r
                .mirror_axes
                .iter()
                .map(|a| AxisEntry {
                    beta: Num(a.beta),
                    sigma: Num(a.sigma),
                    angle: Num(std::f64::consts::PI * a.sigma),
                })
                .collect(),
            classification: Classification {
                kind: kind.to_owned(),
                order,
            },
            verified_maximal: r.verified_maximal,
            zero_pole_orbits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Point>,
    /// Argument-principle value; `null` when the point is on the curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    /// Angle-tracking value, as a cross-check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on_curve: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<TimedWinding>,
}

impl WindingSection {
    pub fn empty() -> Self {
        Self {
            point: None,
            value: None,
            numeric: None,
            on_curve: None,
            profile: None,
            samples: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSection {
    pub speed: Num,
    pub period: Num,
    pub window: [Num; 2],
    pub breakpoints: Vec<Num>,
    pub values: Vec<Option<i64>>,
    pub undefined_times: Vec<Num>,
    pub degenerate_times: Vec<Num>,
}

impl From<&WindingProfile> for ProfileSection {
    fn from(p: &WindingProfile) -> Self {
        Self {
            speed: Num(p.speed),
            period: Num(p.period),
            window: [Num(p.window.0), Num(p.window.1)],
            breakpoints: nums(&p.breakpoints),
            values: p.values.clone(),
            undefined_times: nums(&p.undefined_times),
            degenerate_times: nums(&p.degenerate_times),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimedWinding {
    pub t: Num,
    pub value: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspEntry {
    pub t: Num,
    pub point: Point,
}

impl From<&Cusp> for CuspEntry {
    fn from(c: &Cusp) -> Self {
        Self {
            t: Num(c.t),
            point: c.point.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionEntry {
    pub index: u32,
    pub branch: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionEntry {
    pub point: Point,
    pub parameters: Vec<Num>,
    pub s: Num,
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<DirectionEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfIntersectionSection {
    pub cover: u64,
    /// Distinct image points.
    pub count: usize,
    /// Ordered parameter pairs `(t1, t2)`, `t1 ≠ t2`, with equal images.
    pub pair_count: usize,
    pub points: Vec<IntersectionEntry>,
}

impl From<&SelfIntersections> for SelfIntersectionSection {
    fn from(found: &SelfIntersections) -> Self {
        Self {
            cover: found.cover,
            count: found.points.len(),
            pair_count: found.pair_count(),
            points: found
                .points
                .iter()
                .map(|x| IntersectionEntry {
                    point: x.point.into(),
                    parameters: nums(&x.parameters),
                    s: Num(x.s),
                    multiplicity: x.multiplicity(),
                    direction: x.direction.map(|d| DirectionEntry {
                        index: d.index,
                        branch: d.branch,
                    }),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityEntry {
    pub point: Point,
    pub count: usize,
    pub parameters: Vec<Num>,
    pub ordinary: bool,
}

impl MultiplicityEntry {
    pub fn new(w: Complex64, m: &Multiplicity) -> Self {
        Self {
            point: w.into(),
            count: m.count(),
            parameters: nums(&m.parameters),
            ordinary: m.ordinary,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventEntry {
    pub t: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winding: Option<Option<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Num>,
}

impl From<&TimelineEvent> for EventEntry {
    fn from(e: &TimelineEvent) -> Self {
        let mut entry = Self {
            t: Num(e.t),
            exact: e.exact.map(|r| r.to_string()),
            kind: String::new(),
            exponent: None,
            winding: None,
            threshold: None,
        };
        match e.kind {
            EventKind::DegenerateCircle { exponent } => {
                entry.kind = "degenerate_circle".to_owned();
                entry.exponent = Some(exponent);
            }
            EventKind::DegeneratePoint => entry.kind = "degenerate_point".to_owned(),
            EventKind::WindingTransition { winding } => {
                entry.kind = "winding_transition".to_owned();
                entry.winding = Some(winding);
            }
            EventKind::CuspTime { threshold } => {
                entry.kind = "cusp_time".to_owned();
                entry.threshold = Some(Num(threshold));
            }
        }
        entry
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimedSelfIntersections {
    pub t: Num,
    /// The curve collapsed to a circle or point at this time.
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub found: Option<SelfIntersectionSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveSection {
    pub speed: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed_exact: Option<String>,
    pub period: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_exact: Option<String>,
    pub always_degenerate: bool,
    pub events: Vec<EventEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frames: Vec<Num>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub self_intersections: Vec<TimedSelfIntersections>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSection {
    pub r_min: Num,
    pub r_max: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_min: Option<Num>,
    pub horizon: Num,
    pub conj_symmetric: bool,
    /// Exact period when the exponents are commensurable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<String>,
    pub independent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensitySection {
    pub r_min: Num,
    pub r_max: Num,
    pub radial_cells: usize,
    pub angular_cells: usize,
    pub coverage_fraction: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietySection {
    pub degree: usize,
    /// Largest `|h|/scale` over curve samples.
    pub curve_residual: Num,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rotation_residuals: Vec<Num>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mirror_residuals: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSection {
    pub size: usize,
    pub extent: Num,
    /// `h` (real) at `w = x + iy`, rows by increasing `y`.
    pub rows: Vec<Vec<Num>>,
}
