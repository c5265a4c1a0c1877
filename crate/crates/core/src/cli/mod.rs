//! The `foliate` command line: `build`, `distortion` and `check`.
//!
//! Exit status is 0 on success (or a passing or inapplicable check), 1
//! when a check fails, 2 for invalid input, 3 when the construction is
//! infeasible and 4 when an analysis step fails.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{ConfigFile, Emit, Overrides, RunConfig};

use crate::leafgen::Geometry;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_ANALYSIS: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "foliate", version, about = "Build curvature-pinched leaves and measure their distortion")]
struct Cli {
    /// Flat key = value config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// tower, ackermann:M, table:PATH or none.
    #[arg(long, global = true, value_name = "KIND[:ARG]")]
    oracle: Option<String>,
    #[arg(long = "n-max", global = true, value_name = "N")]
    n_max: Option<usize>,
    #[arg(long, global = true, value_name = "X", allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long, global = true, value_name = "X", allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Samples per segment.
    #[arg(long, global = true, value_name = "N")]
    samples: Option<usize>,
    /// Comma-separated subset of csv,svg,leaf.
    #[arg(long, global = true, value_name = "LIST")]
    emit: Option<String>,
    /// h2 or e2.
    #[arg(long, global = true, value_name = "KIND")]
    geometry: Option<String>,
    /// Parabola half-width K (e2).
    #[arg(long = "k-width", global = true, value_name = "X")]
    k_width: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct a leaf and write it with its distortion profile.
    Build,
    /// Distortion profile of a leaf file as CSV and SVG.
    Distortion {
        leaf: PathBuf,
        /// Comma-separated angles (h2) or abscissas (e2) for symmetric pairs.
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        theta: Option<String>,
    },
    /// Run one check on a leaf file or a named curve (horocycle,
    /// hyperbolic-circle, geodesic, figure-eight, spiral).
    Check {
        target: String,
        /// curvature, monotone, intersect or expbound.
        check: String,
        /// Self-intersection resolution.
        #[arg(long, default_value_t = 1e-3, value_name = "X")]
        tolerance: f64,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
pub(crate) struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn overrides(cli: &Cli) -> Result<Overrides, Failure> {
    let bad = |m: String| Failure::new(EXIT_VALIDATION, m);
    let geometry = match cli.geometry.as_deref() {
        None => None,
        Some("h2") => Some(Geometry::H2),
        Some("e2") => Some(Geometry::E2),
        Some(g) => return Err(bad(format!("--geometry must be h2 or e2, got '{g}'"))),
    };
    let oracle = match &cli.oracle {
        None => None,
        Some(s) => Some(config::parse_oracle(s, std::path::Path::new(".")).map_err(bad)?),
    };
    let emit = match &cli.emit {
        None => None,
        Some(s) => Some(config::parse_emit(s).map_err(bad)?),
    };
    Ok(Overrides {
        geometry,
        delta: cli.delta,
        epsilon: cli.epsilon,
        k_width: cli.k_width,
        n_max: cli.n_max,
        samples: cli.samples,
        oracle,
        out_dir: cli.out.clone(),
        emit,
    })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p).map_err(|m| Failure::new(EXIT_VALIDATION, m))?,
        None => ConfigFile::default(),
    };
    let flags = overrides(&cli)?;
    match cli.command {
        Command::Build => {
            let run = RunConfig::resolve(file, flags).map_err(|m| Failure::new(EXIT_VALIDATION, m))?;
            commands::build(&run, out)
        }
        Command::Distortion { leaf, theta } => {
            let out_dir = flags.out_dir.or(file.out_dir).unwrap_or_else(|| PathBuf::from("out"));
            let emit = flags
                .emit
                .or(file.emit)
                .unwrap_or_else(|| [Emit::Csv, Emit::Svg].into_iter().collect());
            commands::distortion(&leaf, theta.as_deref(), flags.n_max, &out_dir, &emit, out)
        }
        Command::Check { target, check, tolerance } => {
            commands::check(&target, &check, flags.samples, tolerance, out)
        }
    }
}

/// Runs the command line `args` (program name first), writing reports to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
