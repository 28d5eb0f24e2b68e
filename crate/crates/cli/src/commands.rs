use std::path::PathBuf;

use rayon::prelude::*;
use rosette_core::expsum::ExponentialSum;
use rosette_core::parser::{self, ParseDiagnostic};
use rosette_core::selfint::{
    cusps, point_multiplicity, self_intersections, self_intersections_wave, SelfIntersections,
};
use rosette_core::symmetry::{
    annulus_bounds, classify_group, conj_symmetry_check, density_shard, estimate_from,
    zero_pole_orbit_check, CoverageMap, DensityPlan, SymmetryReport,
};
use rosette_core::variety::{
    curve_residual, mirror_invariance_check, rotation_invariance_check, VarietyEvaluator,
};
use rosette_core::wave::{timeline, Speed, TwoTerm, WaveField};
use rosette_core::winding::{
    wave_winding, winding_argument_principle, winding_profile, winding_sampled,
};
use rosette_core::{Complex64, Error, LaurentPolynomial};

use crate::csv_out::{export_csv, table};
use crate::report::*;
use crate::svg::{axis_angles, render_svg, Panel, RenderOptions};
use crate::{Canvas, CliError, Command, Common, Format};

type Out = Result<String, CliError>;

const DENSITY_SHARD: u64 = 1 << 20;

pub fn dispatch(command: &Command) -> (Out, Option<&PathBuf>) {
    match command {
        Command::Analyze {
            expr,
            points,
            common,
            canvas,
        } => (
            analyze(expr, points, common, canvas),
            common.output.as_ref(),
        ),
        Command::Render {
            expr,
            horizon,
            common,
            canvas,
        } => (
            render(expr, *horizon, common, canvas),
            common.output.as_ref(),
        ),
        Command::Evolve {
            expr,
            speed,
            frames,
            common,
            canvas,
        } => (
            evolve(expr, speed, *frames as usize, common, canvas),
            common.output.as_ref(),
        ),
        Command::Selfint {
            expr,
            speed,
            times,
            common,
            canvas,
        } => (
            selfint(expr, speed.as_deref(), *times as usize, common, canvas),
            common.output.as_ref(),
        ),
        Command::Winding {
            expr,
            point,
            speed,
            window,
            times,
            common,
        } => (
            winding(
                expr,
                point.as_deref(),
                speed.as_deref(),
                window.as_deref(),
                *times as usize,
                common,
            ),
            common.output.as_ref(),
        ),
        Command::Annulus {
            expr,
            horizon,
            radial,
            angular,
            assume_independent,
            common,
        } => (
            annulus(
                expr,
                *horizon,
                *radial as usize,
                *angular as usize,
                *assume_independent,
                common,
            ),
            common.output.as_ref(),
        ),
        Command::Variety {
            expr,
            grid,
            extent,
            common,
        } => (
            variety(expr, *grid as usize, *extent, common),
            common.output.as_ref(),
        ),
    }
}

fn parse_error(input: &str, diagnostic: ParseDiagnostic) -> CliError {
    CliError::Parse {
        input: input.to_owned(),
        diagnostic,
    }
}

fn laurent(expr: &str) -> Result<LaurentPolynomial, CliError> {
    parser::parse_laurent(expr).map_err(|d| parse_error(expr, d))
}

/// An exponential sum, or a Laurent polynomial read as one.
fn expsum(expr: &str) -> Result<ExponentialSum, CliError> {
    match parser::parse_expsum(expr) {
        Ok(g) => Ok(g),
        Err(d) => match parser::parse_laurent(expr) {
            Ok(p) => Ok(p.to_exponential_sum()),
            Err(_) => Err(parse_error(expr, d)),
        },
    }
}

fn is_expsum(expr: &str) -> bool {
    expr.contains("e(")
}

fn point(text: &str) -> Result<Complex64, CliError> {
    parser::parse_constant(text).map_err(|d| parse_error(text, d))
}

fn speed(text: &str) -> Result<Speed, CliError> {
    text.parse().map_err(|_| {
        CliError::Usage(format!(
            "speed `{text}` must be a positive number or fraction p/q"
        ))
    })
}

fn window(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "window `{text}` must be START,END with START < END"
        ))
    };
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let (a, b): (f64, f64) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    Ok((a, b))
}

fn json(report: &Report) -> Out {
    report
        .to_json()
        .map_err(|e| CliError::Numeric(e.to_string()))
}

fn csv(result: Result<String, csv::Error>) -> Out {
    result.map_err(|e| CliError::Io(e.to_string()))
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Usage(format!("`{command}` does not produce {format:?} output").to_lowercase())
}

fn render_options(canvas: &Canvas) -> RenderOptions {
    RenderOptions {
        width: canvas.width,
        height: canvas.height,
        show_intersections: !canvas.no_markers,
        show_cusps: !canvas.no_markers,
        show_axes: !canvas.no_markers,
        show_origin: !canvas.no_markers,
        columns: canvas.columns,
        ..RenderOptions::default()
    }
}

fn curve_samples(p: &LaurentPolynomial, n: usize) -> Vec<(f64, Complex64)> {
    (0..n)
        .map(|k| {
            let t = k as f64 / n as f64;
            (t, p.eval_circle(t))
        })
        .collect()
}

/// Self-intersections where the method applies; negative exponents are
/// left out with a note.
fn intersections_if_polynomial(
    p: &LaurentPolynomial,
    notes: &mut Vec<String>,
) -> Result<Option<SelfIntersections>, CliError> {
    match self_intersections(p) {
        Ok(found) => Ok(Some(found)),
        Err(Error::NegativeExponent(_)) => {
            notes.push(
                "self-intersections are computed only for curves without negative exponents".into(),
            );
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn symmetry(p: &LaurentPolynomial) -> Option<(SymmetryReport, Option<bool>)> {
    let report = classify_group(p).ok()?;
    let orbits = zero_pole_orbit_check(p, &report).ok();
    Some((report, orbits))
}

fn annotated_panel(
    p: &LaurentPolynomial,
    samples: usize,
    notes: &mut Vec<String>,
) -> Result<Panel, CliError> {
    let found = intersections_if_polynomial(p, notes)?;
    let sym = symmetry(p);
    Ok(Panel {
        curve: curve_samples(p, samples).into_iter().map(|s| s.1).collect(),
        intersections: found
            .map(|f| f.points.iter().map(|x| x.point).collect())
            .unwrap_or_default(),
        cusps: cusps(p)
            .map(|c| c.iter().map(|c| c.point).collect())
            .unwrap_or_default(),
        axes: sym
            .map(|(r, _)| axis_angles(r.mirror_axes.iter().map(|a| a.sigma)))
            .unwrap_or_default(),
        label: None,
    })
}

/// `1 + z + ... + z^n`.
fn is_geometric(p: &LaurentPolynomial) -> bool {
    p.min_exponent() == Some(0)
        && p.terms()
            .iter()
            .enumerate()
            .all(|(k, &(n, c))| n == k as i64 && c == Complex64::new(1.0, 0.0))
}

fn analyze(expr: &str, points: &[String], common: &Common, canvas: &Canvas) -> Out {
    let format = common.format.unwrap_or(Format::Json);
    if is_expsum(expr) && parser::parse_laurent(expr).is_err() {
        if format != Format::Json {
            return Err(unsupported("analyze", format));
        }
        let g = expsum(expr)?;
        let mut report = Report::new(
            "analyze",
            expr,
            parser::format_expsum(&g),
            "exponential_sum",
        );
        report.annulus = Some(annulus_section(&g, 100.0, common.samples as usize, false)?);
        return json(&report);
    }
    let p = laurent(expr)?;
    let mut notes = Vec::new();
    match format {
        Format::Svg => {
            let panel = annotated_panel(&p, common.samples as usize, &mut notes)?;
            return Ok(render_svg(&[panel], &render_options(canvas)));
        }
        Format::Csv => return csv(export_csv(&curve_samples(&p, common.samples as usize))),
        Format::Json => {}
    }
    let mut report = Report::new("analyze", expr, parser::format(&p), "laurent");
    report.symmetry = symmetry(&p).map(|(r, orbits)| SymmetrySection::from_report(&r, orbits));

    let origin = Complex64::new(0.0, 0.0);
    let mut section = WindingSection::empty();
    section.point = Some(origin.into());
    match winding_argument_principle(&p, origin) {
        Ok(v) => {
            section.value = Some(v);
            section.numeric = winding_sampled(|t| p.eval_circle(t), origin).ok();
            section.on_curve = Some(false);
        }
        Err(Error::PointOnCurve { .. }) => section.on_curve = Some(true),
        Err(e) => return Err(e.into()),
    }
    report.winding = Some(section);

    report.cusps = cusps(&p)
        .ok()
        .map(|c| c.iter().map(CuspEntry::from).collect());
    report.self_intersections = intersections_if_polynomial(&p, &mut notes)?
        .as_ref()
        .map(SelfIntersectionSection::from);

    for text in points {
        let w = point(text)?;
        let m = point_multiplicity(&p, w)?;
        report.multiplicities.push(MultiplicityEntry::new(w, &m));
        if is_geometric(&p) && w == Complex64::new(1.0, 0.0) {
            let n = p.max_exponent().unwrap_or(0);
            notes.push(format!(
                "1 + z + ... + z^{n} takes the value 1 on the circle only where z + ... + z^{n} = 0: {} points, the {n}-th roots of unity other than 1, not {}",
                n - 1,
                n + 1
            ));
        }
    }
    if !report.multiplicities.is_empty() {
        notes.push("multiplicities count distinct roots z of p(z) = w with ||z| - 1| <= 1e-8; ordinary means pairwise distinct tangent lines".into());
    }
    report.notes = notes;
    json(&report)
}

fn render(expr: &str, horizon: f64, common: &Common, canvas: &Canvas) -> Out {
    let format = common.format.unwrap_or(Format::Svg);
    let n = common.samples as usize;
    let samples: Vec<(f64, Complex64)>;
    let mut panel = Panel::default();
    if is_expsum(expr) && parser::parse_laurent(expr).is_err() {
        let g = expsum(expr)?;
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(CliError::Usage("horizon must be positive".into()));
        }
        samples = (0..n)
            .map(|k| {
                let t = horizon * k as f64 / (n - 1) as f64;
                (t, g.eval(t))
            })
            .collect();
        panel.curve = samples.iter().map(|s| s.1).collect();
    } else {
        let p = laurent(expr)?;
        samples = curve_samples(&p, n);
        if format == Format::Svg {
            panel = annotated_panel(&p, n, &mut Vec::new())?;
        }
    }
    match format {
        Format::Svg => Ok(render_svg(&[panel], &render_options(canvas))),
        Format::Csv => csv(export_csv(&samples)),
        Format::Json => Err(unsupported("render", format)),
    }
}

fn frame_label(t: f64) -> String {
    format!("t = {}", trim_float(t))
}

/// Up to six decimals, trailing zeros removed.
fn trim_float(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

fn wave_section(
    field: &WaveField,
    speed: Speed,
    two: Option<&TwoTerm>,
) -> Result<WaveSection, CliError> {
    let degenerate = field.degenerate_times();
    let events = match two {
        Some(two) => timeline(two, speed, None)?,
        None => degenerate.events.clone(),
    };
    Ok(WaveSection {
        speed: Num(speed.value()),
        speed_exact: speed.exact().map(|r| r.to_string()),
        period: field.period().map(Num),
        period_exact: field.period_exact().map(|r| r.to_string()),
        always_degenerate: degenerate.always_degenerate,
        events: events.iter().map(EventEntry::from).collect(),
        frames: Vec::new(),
        self_intersections: Vec::new(),
    })
}

fn evolve(expr: &str, speed_text: &str, frames: usize, common: &Common, canvas: &Canvas) -> Out {
    let p = laurent(expr)?;
    let c = speed(speed_text)?;
    let field = WaveField::new(p.clone(), c)?;
    let period = field
        .period()
        .ok_or_else(|| CliError::Numeric("a constant curve does not evolve".into()))?;
    let n = common.samples as usize;
    let times: Vec<f64> = (0..frames)
        .map(|j| period * j as f64 / frames as f64)
        .collect();
    let curves: Vec<Vec<Complex64>> = times
        .par_iter()
        .map(|&t| {
            (0..n)
                .map(|k| field.wave_eval(k as f64 / n as f64, t))
                .collect()
        })
        .collect();
    match common.format.unwrap_or(Format::Svg) {
        Format::Svg => {
            let panels: Vec<Panel> = times
                .iter()
                .zip(curves)
                .map(|(&t, curve)| Panel {
                    curve,
                    label: Some(frame_label(t)),
                    ..Panel::default()
                })
                .collect();
            Ok(render_svg(&panels, &render_options(canvas)))
        }
        Format::Csv => csv(table(
            &["frame", "time", "t", "re", "im"],
            times
                .iter()
                .zip(&curves)
                .enumerate()
                .flat_map(|(j, (time, curve))| {
                    curve.iter().enumerate().map(move |(k, z)| {
                        vec![
                            j.to_string(),
                            time.to_string(),
                            (k as f64 / n as f64).to_string(),
                            z.re.to_string(),
                            z.im.to_string(),
                        ]
                    })
                }),
        )),
        Format::Json => {
            let two = TwoTerm::from_polynomial(&p).ok();
            let mut report = Report::new("evolve", expr, parser::format(&p), "laurent");
            let mut section = wave_section(&field, c, two.as_ref())?;
            section.frames = times.iter().copied().map(Num).collect();
            report.wave = Some(section);
            json(&report)
        }
    }
}

fn selfint(
    expr: &str,
    speed_text: Option<&str>,
    times: usize,
    common: &Common,
    canvas: &Canvas,
) -> Out {
    let p = laurent(expr)?;
    let format = common.format.unwrap_or(Format::Json);
    let Some(speed_text) = speed_text else {
        let found = self_intersections(&p)?;
        let cusp_list = cusps(&p).unwrap_or_default();
        return match format {
            Format::Json => {
                let mut report = Report::new("selfint", expr, parser::format(&p), "laurent");
                report.self_intersections = Some((&found).into());
                report.cusps = Some(cusp_list.iter().map(CuspEntry::from).collect());
                json(&report)
            }
            Format::Csv => csv(table(
                &["re", "im", "t1", "t2", "multiplicity"],
                found.points.iter().map(|x| {
                    vec![
                        x.point.re.to_string(),
                        x.point.im.to_string(),
                        x.t1().to_string(),
                        x.t2().to_string(),
                        x.multiplicity().to_string(),
                    ]
                }),
            )),
            Format::Svg => {
                let panel = annotated_panel(&p, common.samples as usize, &mut Vec::new())?;
                Ok(render_svg(&[panel], &render_options(canvas)))
            }
        };
    };
    let c = speed(speed_text)?;
    let two = TwoTerm::from_polynomial(&p).map_err(|_| {
        CliError::Numeric("self-intersections along the wave flow need exactly two terms".into())
    })?;
    let field = WaveField::new(p.clone(), c)?;
    let period = field.period().unwrap_or(1.0);
    let stamps: Vec<f64> = (0..times)
        .map(|j| period * j as f64 / times as f64)
        .collect();
    let results: Vec<(f64, Option<SelfIntersections>)> = stamps
        .par_iter()
        .map(|&t| match self_intersections_wave(&two, c, t) {
            Ok(found) => Ok((t, Some(found))),
            Err(Error::DegenerateTime { .. }) => Ok((t, None)),
            Err(e) => Err(CliError::from(e)),
        })
        .collect::<Result<_, _>>()?;
    match format {
        Format::Json => {
            let mut report = Report::new("selfint", expr, parser::format(&p), "laurent");
            let mut section = wave_section(&field, c, Some(&two))?;
            section.self_intersections = results
                .iter()
                .map(|(t, found)| TimedSelfIntersections {
                    t: Num(*t),
                    degenerate: found.is_none(),
                    found: found.as_ref().map(SelfIntersectionSection::from),
                })
                .collect();
            report.wave = Some(section);
            json(&report)
        }
        Format::Csv => csv(table(
            &["time", "re", "im", "t1", "t2"],
            results.iter().flat_map(|(t, found)| {
                found.iter().flat_map(|f| f.points.iter()).map(move |x| {
                    vec![
                        t.to_string(),
                        x.point.re.to_string(),
                        x.point.im.to_string(),
                        x.t1().to_string(),
                        x.t2().to_string(),
                    ]
                })
            }),
        )),
        Format::Svg => {
            let n = common.samples as usize;
            let panels = results
                .par_iter()
                .map(|(t, found)| Panel {
                    curve: (0..n)
                        .map(|k| field.wave_eval(k as f64 / n as f64, *t))
                        .collect(),
                    intersections: found
                        .iter()
                        .flat_map(|f| f.points.iter().map(|x| x.point))
                        .collect(),
                    label: Some(frame_label(*t)),
                    ..Panel::default()
                })
                .collect::<Vec<_>>();
            Ok(render_svg(&panels, &render_options(canvas)))
        }
    }
}

fn winding(
    expr: &str,
    point_text: Option<&str>,
    speed_text: Option<&str>,
    window_text: Option<&str>,
    times: usize,
    common: &Common,
) -> Out {
    let p = laurent(expr)?;
    let format = common.format.unwrap_or(Format::Json);
    if format == Format::Svg {
        return Err(unsupported("winding", format));
    }
    let mut report = Report::new("winding", expr, parser::format(&p), "laurent");
    let mut section = WindingSection::empty();
    let window = window_text.map(window).transpose()?;

    if let Some(speed_text) = speed_text {
        let c = speed(speed_text)?;
        let field = WaveField::new(p.clone(), c)?;
        if let Ok(two) = TwoTerm::from_polynomial(&p) {
            let profile = winding_profile(&two, c, window)?;
            if format == Format::Csv {
                let mut edges = vec![profile.window.0];
                edges.extend_from_slice(&profile.breakpoints);
                edges.push(profile.window.1);
                return csv(table(
                    &["start", "end", "winding"],
                    edges.windows(2).zip(&profile.values).map(|(w, v)| {
                        vec![
                            w[0].to_string(),
                            w[1].to_string(),
                            v.map_or(String::new(), |v| v.to_string()),
                        ]
                    }),
                ));
            }
            section.profile = Some((&profile).into());
        } else {
            let period = field
                .period()
                .ok_or_else(|| CliError::Numeric("a constant curve has no winding".into()))?;
            let (lo, hi) = window.unwrap_or((0.0, period));
            let stamps: Vec<f64> = (0..times)
                .map(|j| lo + (hi - lo) * j as f64 / times as f64)
                .collect();
            section.samples = stamps
                .par_iter()
                .map(|&t| TimedWinding {
                    t: Num(t),
                    value: wave_winding(&field, t).ok(),
                })
                .collect();
            if format == Format::Csv {
                return csv(table(
                    &["t", "winding"],
                    section.samples.iter().map(|s| {
                        vec![
                            s.t.0.to_string(),
                            s.value.map_or(String::new(), |v| v.to_string()),
                        ]
                    }),
                ));
            }
        }
        report.wave = Some(wave_section(&field, c, None)?);
    } else {
        let w0 = point_text
            .map(point)
            .transpose()?
            .unwrap_or(Complex64::new(0.0, 0.0));
        let value = winding_argument_principle(&p, w0)?;
        let numeric = winding_sampled(|t| p.eval_circle(t), w0).ok();
        if format == Format::Csv {
            return csv(table(
                &["re", "im", "winding"],
                [vec![
                    w0.re.to_string(),
                    w0.im.to_string(),
                    value.to_string(),
                ]],
            ));
        }
        section.point = Some(w0.into());
        section.value = Some(value);
        section.numeric = numeric;
        section.on_curve = Some(false);
    }
    report.winding = Some(section);
    json(&report)
}

fn annulus_section(
    g: &ExponentialSum,
    horizon: f64,
    samples: usize,
    assume_independent: bool,
) -> Result<AnnulusSection, CliError> {
    let mut g = g.clone();
    if assume_independent {
        g.assert_independent();
    }
    let bounds = annulus_bounds(&g, horizon, samples.max(2))?;
    let independent = match g.rational_independence() {
        Ok(b) => Some(b),
        Err(Error::IndependenceUnknown) => None,
        Err(e) => return Err(e.into()),
    };
    let period = match g.periodicity_check() {
        Ok(p) => p.map(|p| p.to_string()),
        Err(Error::IndependenceUnknown) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(AnnulusSection {
        r_min: Num(bounds.r_min),
        r_max: Num(bounds.r_max),
        analytic_min: bounds.analytic_min.map(Num),
        horizon: Num(horizon),
        conj_symmetric: conj_symmetry_check(&g, samples.max(2)),
        period,
        independent,
        density: None,
    })
}

fn annulus(
    expr: &str,
    horizon: f64,
    radial: usize,
    angular: usize,
    assume_independent: bool,
    common: &Common,
) -> Out {
    let mut g = expsum(expr)?;
    let format = common.format.unwrap_or(Format::Json);
    if format != Format::Json {
        return Err(unsupported("annulus", format));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(CliError::Usage("horizon must be positive".into()));
    }
    let mut section = annulus_section(&g, horizon, common.samples as usize, assume_independent)?;
    if assume_independent {
        g.assert_independent();
    }
    if section.independent == Some(true) {
        let plan = DensityPlan::new(&g, horizon, radial, angular)?;
        let shards: Vec<std::ops::Range<u64>> = (0..plan.steps)
            .step_by(DENSITY_SHARD as usize)
            .map(|start| start..(start + DENSITY_SHARD).min(plan.steps))
            .collect();
        let maps: Vec<CoverageMap> = shards
            .into_par_iter()
            .map(|r| density_shard(&g, &plan, r))
            .collect();
        let merged = maps
            .iter()
            .fold(CoverageMap::new(plan.cells()), |acc, m| acc.merge(m));
        let estimate = estimate_from(&g, &plan, &merged);
        section.density = Some(DensitySection {
            r_min: Num(estimate.r_min),
            r_max: Num(estimate.r_max),
            radial_cells: estimate.radial_cells,
            angular_cells: estimate.angular_cells,
            coverage_fraction: Num(estimate.coverage_fraction.unwrap_or(0.0)),
        });
    }
    let mut report = Report::new(
        "annulus",
        expr,
        parser::format_expsum(&g),
        "exponential_sum",
    );
    report.annulus = Some(section);
    json(&report)
}

fn variety(expr: &str, grid: usize, extent: Option<f64>, common: &Common) -> Out {
    let p = laurent(expr)?;
    let format = common.format.unwrap_or(Format::Csv);
    if format == Format::Svg {
        return Err(unsupported("variety", format));
    }
    let evaluator = VarietyEvaluator::new(&p)?;
    let extent = extent.unwrap_or(1.1 * p.coefficient_norm());
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(CliError::Usage("extent must be positive".into()));
    }
    let coordinate = |k: usize| -extent + 2.0 * extent * k as f64 / (grid - 1) as f64;
    let rows: Vec<Vec<(f64, f64, f64, f64)>> = (0..grid)
        .into_par_iter()
        .map(|j| {
            let y = coordinate(j);
            (0..grid)
                .map(|k| {
                    let x = coordinate(k);
                    let v = evaluator.eval(Complex64::new(x, y))?;
                    let rel = if v.scale > 0.0 {
                        v.value.norm() / v.scale
                    } else {
                        0.0
                    };
                    Ok((x, y, v.value.norm(), rel))
                })
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<_, _>>()?;
    if format == Format::Csv {
        return csv(table(
            &["re", "im", "abs_h", "rel_h"],
            rows.iter().flatten().map(|&(x, y, a, r)| {
                vec![x.to_string(), y.to_string(), a.to_string(), r.to_string()]
            }),
        ));
    }
    let probes: Vec<Complex64> = (1..=4)
        .map(|j| Complex64::from_polar(0.37 * extent * j as f64 / 4.0, 0.9 * j as f64))
        .collect();
    let sym = classify_group(&p).ok();
    let mut rotation_residuals = Vec::new();
    let mut mirror_residuals = Vec::new();
    if let Some(report) = &sym {
        if let Some((k, m)) = report.symmetry_type.filter(|&(_, m)| m > 1) {
            for &w in &probes {
                rotation_residuals.push(Num(rotation_invariance_check(&p, w, m, k as i64)?));
            }
        }
        for axis in &report.mirror_axes {
            for &w in &probes {
                mirror_residuals.push(Num(mirror_invariance_check(&p, w, axis.sigma)?));
            }
        }
    }
    let mut report = Report::new("variety", expr, parser::format(&p), "laurent");
    report.variety = Some(VarietySection {
        degree: evaluator.degree(),
        curve_residual: Num(curve_residual(&p, 128)?),
        rotation_residuals,
        mirror_residuals,
        grid: Some(GridSection {
            size: grid,
            extent: Num(extent),
            rows: rows
                .iter()
                .map(|r| r.iter().map(|v| Num(v.3)).collect())
                .collect(),
        }),
    });
    json(&report)
}
