//! Deterministic SVG output: fixed-precision coordinates, one shared
//! viewport for every panel of a document.

use std::f64::consts::PI;
use std::fmt::Write;

use rosette_core::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub stroke_width: f64,
    /// Fraction of each panel left empty around the curve.
    pub margin: f64,
    pub show_intersections: bool,
    pub show_cusps: bool,
    pub show_axes: bool,
    pub show_origin: bool,
    /// Panels per row; defaults to a near-square grid.
    pub columns: Option<usize>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width: 800,
            height: 800,
            stroke_width: 1.5,
            margin: 0.05,
            show_intersections: true,
            show_cusps: true,
            show_axes: true,
            show_origin: true,
            columns: None,
        }
    }
}

/// One closed curve with its annotations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Panel {
    pub curve: Vec<Complex64>,
    pub intersections: Vec<Complex64>,
    pub cusps: Vec<Complex64>,
    /// Angles in radians of symmetry axes through the origin.
    pub axes: Vec<f64>,
    pub label: Option<String>,
}

const MARKER: f64 = 4.0;

/// Fixed three-decimal formatting without negative zero.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_owned()
    } else {
        s
    }
}

struct Frame {
    left: f64,
    top: f64,
    scale: f64,
    cx: f64,
    cy: f64,
}

impl Frame {
    fn map(&self, z: Complex64) -> (f64, f64) {
        (
            self.left + self.scale * (z.re - self.cx),
            self.top - self.scale * (z.im - self.cy),
        )
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render_svg(panels: &[Panel], options: &RenderOptions) -> String {
    let count = panels.len().max(1);
    let columns = options
        .columns
        .unwrap_or_else(|| (count as f64).sqrt().ceil() as usize)
        .clamp(1, count);
    let rows = count.div_ceil(columns);
    let (width, height) = (f64::from(options.width), f64::from(options.height));
    let (pw, ph) = (width / columns as f64, height / rows as f64);

    // Isotropic fit of the union of all panels, so frames compare.
    let (mut lo, mut hi) = (
        Complex64::new(f64::INFINITY, f64::INFINITY),
        Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for z in panels
        .iter()
        .flat_map(|p| p.curve.iter().chain(&p.intersections).chain(&p.cusps))
    {
        if z.re.is_finite() && z.im.is_finite() {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
    }
    if !lo.re.is_finite() {
        lo = Complex64::new(-1.0, -1.0);
        hi = Complex64::new(1.0, 1.0);
    }
    let extent = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
    let usable = pw.min(ph) * (1.0 - 2.0 * options.margin);
    let scale = usable / extent;
    let (cx, cy) = (0.5 * (lo.re + hi.re), 0.5 * (lo.im + hi.im));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = options.width,
        h = options.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, panel) in panels.iter().enumerate() {
        let (col, row) = (k % columns, k / columns);
        let frame = Frame {
            left: pw * (col as f64 + 0.5),
            top: ph * (row as f64 + 0.5),
            scale,
            cx,
            cy,
        };
        let _ = writeln!(out, r#"<g id="panel-{k}">"#);
        if options.show_axes {
            let reach = extent;
            for &angle in &panel.axes {
                let dir = Complex64::from_polar(reach, angle);
                let (x1, y1) = frame.map(-dir);
                let (x2, y2) = frame.map(dir);
                let _ = writeln!(
                    out,
                    r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888888" stroke-width="0.75" stroke-dasharray="6 4"/>"##,
                    num(x1),
                    num(y1),
                    num(x2),
                    num(y2)
                );
            }
        }
        if !panel.curve.is_empty() {
            let mut d = String::new();
            for (j, &z) in panel.curve.iter().enumerate() {
                let (x, y) = frame.map(z);
                let _ = write!(
                    d,
                    "{}{} {}",
                    if j == 0 { "M" } else { " L" },
                    num(x),
                    num(y)
                );
            }
            d.push_str(" Z");
            let _ = writeln!(
                out,
                r##"<path d="{d}" fill="none" stroke="#1f4e9c" stroke-width="{}" stroke-linejoin="round"/>"##,
                num(options.stroke_width)
            );
        }
        if options.show_origin {
            let (x, y) = frame.map(Complex64::new(0.0, 0.0));
            let _ = writeln!(
                out,
                r##"<circle cx="{}" cy="{}" r="1.5" fill="#000000"/>"##,
                num(x),
                num(y)
            );
        }
        if options.show_intersections {
            for &z in &panel.intersections {
                let (x, y) = frame.map(z);
                let _ = writeln!(
                    out,
                    r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#c0392b" stroke-width="1"/>"##,
                    num(x),
                    num(y),
                    num(MARKER)
                );
            }
        }
        if options.show_cusps {
            for &z in &panel.cusps {
                let (x, y) = frame.map(z);
                let _ = writeln!(
                    out,
                    r##"<path d="M{} {} L{} {} M{} {} L{} {}" stroke="#27ae60" stroke-width="1.25"/>"##,
                    num(x - MARKER),
                    num(y - MARKER),
                    num(x + MARKER),
                    num(y + MARKER),
                    num(x - MARKER),
                    num(y + MARKER),
                    num(x + MARKER),
                    num(y - MARKER)
                );
            }
        }
        if let Some(label) = &panel.label {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
                num(pw * col as f64 + 6.0),
                num(ph * row as f64 + 16.0),
                escape(label)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// Axis angles of the lines fixed by the reflections `w ↦ e^{2πiσ} w̄`.
pub fn axis_angles(sigmas: impl IntoIterator<Item = f64>) -> Vec<f64> {
    sigmas.into_iter().map(|s| PI * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize, r: f64) -> Vec<Complex64> {
        (0..n)
            .map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64))
            .collect()
    }

    #[test]
    fn path_only() {
        let svg = render_svg(
            &[Panel {
                curve: circle(16, 1.0),
                ..Panel::default()
            }],
            &RenderOptions::default(),
        );
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(!svg.contains("stroke-dasharray"));
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn annotations() {
        let panel = Panel {
            curve: circle(32, 2.0),
            intersections: vec![Complex64::new(0.5, 0.5)],
            cusps: vec![Complex64::new(-0.5, 0.0)],
            axes: axis_angles([0.0, 0.2, 0.4, 0.6, 0.8]),
            label: Some("t = 0 & <x>".into()),
        };
        let svg = render_svg(&[panel], &RenderOptions::default());
        assert_eq!(svg.matches("stroke-dasharray").count(), 5);
        assert_eq!(svg.matches(r##"stroke="#c0392b""##).count(), 1);
        assert!(svg.contains("t = 0 &amp; &lt;x&gt;"));
    }

    #[test]
    fn y_axis_points_up_and_fit_is_shared() {
        let panels = [
            Panel {
                curve: vec![
                    Complex64::new(0.0, 1.0),
                    Complex64::new(0.0, -1.0),
                    Complex64::new(1.0, 0.0),
                ],
                ..Panel::default()
            },
            Panel {
                curve: vec![
                    Complex64::new(0.0, 0.1),
                    Complex64::new(0.0, -0.1),
                    Complex64::new(0.1, 0.0),
                ],
                ..Panel::default()
            },
        ];
        let svg = render_svg(&panels, &RenderOptions::default());
        // the first point (0, 1) sits above the centre of its panel
        let first = svg.split("d=\"M").nth(1).unwrap();
        let y: f64 = first.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(y < 400.0);
        assert_eq!(svg, render_svg(&panels, &RenderOptions::default()));
        assert_eq!(num(-0.0001), "0.000");
    }
}
