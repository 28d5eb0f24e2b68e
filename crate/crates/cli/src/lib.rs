//! The `rosette` command line: argument parsing, subcommands and output.

pub mod csv_out;
pub mod report;
pub mod svg;

mod commands;
mod diagnostics;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use diagnostics::CliError;

#[derive(Debug, Parser)]
#[command(name = "rosette", version, about = "Analyze and draw rosette curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Csv,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Curve samples used for drawing and numeric checks.
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u32).range(16..))]
    pub samples: u32,
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct Canvas {
    #[arg(long, default_value_t = 800, value_parser = clap::value_parser!(u32).range(1..))]
    pub width: u32,
    #[arg(long, default_value_t = 800, value_parser = clap::value_parser!(u32).range(1..))]
    pub height: u32,
    /// Panels per row in frame grids.
    #[arg(long)]
    pub columns: Option<usize>,
    /// Draw the curve only.
    #[arg(long)]
    pub no_markers: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symmetry, winding, cusps, self-intersections and multiple points.
    Analyze {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Points whose preimages on the circle are counted.
        #[arg(long = "at", allow_hyphen_values = true, default_values_t = ["0".to_owned(), "1".to_owned()])]
        points: Vec<String>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        canvas: Canvas,
    },
    /// Draw the curve with its annotations.
    Render {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Time span drawn for exponential sums.
        #[arg(long, default_value_t = 50.0)]
        horizon: f64,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        canvas: Canvas,
    },
    /// Frames of the wave evolution over one period.
    Evolve {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        speed: String,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=4096))]
        frames: u32,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        canvas: Canvas,
    },
    /// Self-intersections and cusps, optionally along the wave flow.
    Selfint {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        speed: Option<String>,
        /// Evenly spaced times in one period when a speed is given.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=65536))]
        times: u32,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        canvas: Canvas,
    },
    /// Winding number about a point, or its profile along the wave flow.
    Winding {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// A point such as `0.5-2i`.
        #[arg(long, conflicts_with = "speed", allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long)]
        speed: Option<String>,
        /// Time window `START,END`; defaults to one period.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Sample times for curves with more than two terms.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=65536))]
        times: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Annulus bounds and density of an exponential sum.
    Annulus {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        horizon: f64,
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=4096))]
        radial: u32,
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=4096))]
        angular: u32,
        /// Treat exponents that cannot be checked exactly (like `pi`) as
        /// rationally independent.
        #[arg(long)]
        assume_independent: bool,
        #[command(flatten)]
        common: Common,
    },
    /// The implicit curve `h(w, w̄) = 0` through the image.
    Variety {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Grid points per side.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..=2048))]
        grid: u32,
        /// Half-width of the square grid; defaults to just past the curve.
        #[arg(long)]
        extent: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 for unparsable input, 2 for numeric failures.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (result, output) = commands::dispatch(&cli.command);
    match result.and_then(|text| emit(&text, output)) {
        Ok(()) => 0,
        Err(e) => {
            diagnostics::report(&e);
            e.exit_code()
        }
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                // A closed pipe (`rosette ... | head`) is not a failure.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Io(e.to_string()))
                }
                _ => Ok(()),
            }
        }
    }
}
