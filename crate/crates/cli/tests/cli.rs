use std::process::{Command, Output};

use serde_json::Value;

fn rosette(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rosette"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = rosette(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn analyze_reports_schema_and_counts() {
    let v = json(&["analyze", "z^5+0.1*z"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["normalized"], "0.1*z + z^5");
    assert_eq!(v["symmetry"]["classification"]["kind"], "dihedral");
    assert_eq!(v["winding"]["value"], 5);
    assert_eq!(v["self_intersections"]["pair_count"], 32);
    assert_eq!(v["self_intersections"]["count"], 16);
}

#[test]
fn analyze_multiplicities_and_note() {
    let v = json(&["analyze", "1+z+z^2+z^3+z^4+z^5"]);
    let m = v["multiplicities"].as_array().unwrap();
    assert_eq!(m[0]["count"], 5);
    assert_eq!(m[0]["ordinary"], true);
    assert_eq!(m[1]["count"], 4);
    assert!(v["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().contains("not 6")));
}

#[test]
fn laurent_curves_skip_self_intersections_with_a_note() {
    let v = json(&["analyze", "(z^3-z^(-1))/(2i)"]);
    assert_eq!(v["symmetry"]["symmetry_type"], serde_json::json!([3, 4]));
    assert!(v.get("self_intersections").is_none());
    assert!(!v["notes"].as_array().unwrap().is_empty());
}

#[test]
fn parse_error_exits_one_with_caret() {
    let out = rosette(&["analyze", "z^5+0.1z"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("offset 7"), "{err}");
    assert!(err.contains("\n  z^5+0.1z\n         ^"), "{err}");
    assert!(!err.contains('\u{1b}'), "NO_COLOR must disable escapes");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(rosette(&["analyze"]).status.code(), Some(1));
    assert_eq!(rosette(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        rosette(&["winding", "z", "--format", "svg"]).status.code(),
        Some(1)
    );
    assert_eq!(
        rosette(&["evolve", "z^2", "--speed", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(rosette(&["--help"]).status.code(), Some(0));
}

#[test]
fn numeric_failures_exit_two() {
    let on_curve = rosette(&["winding", "z", "--point", "1"]);
    assert_eq!(on_curve.status.code(), Some(2), "{}", stderr(&on_curve));
    let laurent = rosette(&["variety", "z+z^(-1)"]);
    assert_eq!(laurent.status.code(), Some(2));
    let not_two = rosette(&["selfint", "z+z^2+z^3", "--speed", "1"]);
    assert_eq!(not_two.status.code(), Some(2));
}

#[test]
fn huge_coefficients_never_print_non_finite_json() {
    for expr in ["10^300*z^2+10^300*z^3", "10^200*z^2+z^3"] {
        let out = rosette(&["analyze", expr]);
        if out.status.success() {
            let text = String::from_utf8_lossy(&out.stdout);
            assert!(!text.contains("NaN") && !text.contains("inf"));
            serde_json::from_str::<Value>(&text).unwrap();
        } else {
            assert_eq!(out.status.code(), Some(2), "{expr}");
            assert!(out.stdout.is_empty());
        }
    }
    let overflow = rosette(&["analyze", "10^400*z"]);
    assert_eq!(overflow.status.code(), Some(1));
}

#[test]
fn render_svg_and_csv() {
    let svg = rosette(&["render", "z^2+z^7+z^12", "--samples", "256"]);
    let text = String::from_utf8(svg.stdout).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    let csv = rosette(&["render", "z", "--format", "csv", "--samples", "16"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.split("\r\n").collect();
    assert_eq!(lines[0], "t,re,im");
    assert_eq!(lines[1], "0,1,0");
    assert_eq!(lines.len(), 18);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("rosette-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.svg");
    let out = rosette(&["render", "z+0.5*z^3", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let stdout = rosette(&["render", "z+0.5*z^3"]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn evolve_timeline() {
    let v = json(&[
        "evolve",
        "z^2+2*z^5",
        "--speed",
        "1/10",
        "--format",
        "json",
        "--frames",
        "4",
    ]);
    let wave = &v["wave"];
    assert_eq!(wave["period_exact"], "10");
    assert_eq!(wave["frames"].as_array().unwrap().len(), 4);
    let first = wave["events"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["kind"] == "winding_transition")
        .unwrap();
    assert!((first["t"].as_f64().unwrap() - 0.35).abs() < 0.01);
}

#[test]
fn winding_profile_csv() {
    let out = rosette(&[
        "winding",
        "z^2+2*z^5",
        "--speed",
        "1/10",
        "--window",
        "0,1",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let winding: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(winding, ["5", "2", "5"]);
}

#[test]
fn wave_selfint_flags_degenerate_times() {
    let v = json(&["selfint", "6*z+z^6", "--speed", "1/6", "--times", "8"]);
    let samples = v["wave"]["self_intersections"].as_array().unwrap();
    assert_eq!(samples.len(), 8);
    assert_eq!(samples[0]["degenerate"], false);
    assert_eq!(samples[0]["found"]["count"], 0);
    assert!(samples.iter().any(|s| s["degenerate"] == true));
}

#[test]
fn annulus_density() {
    let v = json(&["annulus", "2*e(1)+e(sqrt(2))", "--horizon", "2000"]);
    let a = &v["annulus"];
    assert_eq!(a["analytic_min"], 1.0);
    assert_eq!(a["independent"], true);
    assert!(a["density"]["coverage_fraction"].as_f64().unwrap() >= 0.95);
}

#[test]
fn variety_grid_and_residuals() {
    let v = json(&["variety", "z^2+z^7+z^12", "--grid", "8", "--format", "json"]);
    let section = &v["variety"];
    assert_eq!(section["degree"], 12);
    assert!(section["curve_residual"].as_f64().unwrap() < 1e-8);
    for r in section["rotation_residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-6);
    }
    assert_eq!(section["grid"]["rows"].as_array().unwrap().len(), 8);
}

#[test]
fn leading_minus_is_an_expression_not_a_flag() {
    let v = json(&["analyze", "-z^2", "--at", "-1"]);
    assert_eq!(v["normalized"], "-z^2");
    assert_eq!(v["multiplicities"][0]["count"], 2);
}
