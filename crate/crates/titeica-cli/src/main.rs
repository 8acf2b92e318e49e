//! Command-line front end for the surface-theory verification toolkit.
//!
//! Every command prints one JSON report (or a table with `--pretty`) and
//! exits 0 when all checks pass, 1 when a check fails or a runtime error
//! occurs, and 2 on configuration or usage problems.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::ConfigError;
use crate::report::Report;

#[derive(Parser)]
#[command(name = "titeica", version, about = "Verification toolkit for Titeica surface theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report every check.
    Verify(VerifyArgs),
    /// Build a surface on a grid and certify its centroaffine invariant.
    Surface(SurfaceArgs),
    /// Evaluate a closed-form solution and its equation residuals at a point.
    Eval(EvalArgs),
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite to run: liouville, titeica, symmetry, adjoint, variational,
    /// conservation, integrability, or all.
    pub suite: String,
    /// Seed of the random batteries; overrides config file and TITEICA_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Base sample count per random battery.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Group parameter of the adjoint-table checks.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Multiplier applied to every tolerance.
    #[arg(long, value_name = "FACTOR")]
    pub tol_scale: Option<f64>,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Configuration file with [verify] and [surface] sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print a human-readable table instead of JSON.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    /// Wavefront mesh with two triangles per grid cell.
    Obj,
    /// One row per node with position, curvature, distance, and invariant.
    Csv,
}

#[derive(Args)]
pub struct SurfaceArgs {
    /// Preset: nonruled-const, nonruled-sinh, ruled-liouville, or hyperbolic.
    pub frame: String,
    /// Lower corner of the parameter window.
    #[arg(long, allow_negative_numbers = true)]
    pub u0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Grid spacing along each direction.
    #[arg(long)]
    pub du: Option<f64>,
    #[arg(long)]
    pub dv: Option<f64>,
    /// Node counts along each direction.
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
    /// Scale of the hyperbolic preset.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Phase shift of the sinh-profile preset.
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    /// Mesh format to write; requires --out.
    #[arg(long, value_enum)]
    pub export: Option<ExportFormat>,
    /// Destination of the exported mesh.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Configuration file with [verify] and [surface] sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print a human-readable table instead of JSON.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Solution: titeica-const, titeica-sinh, or liouville-general.
    pub solution: String,
    /// Generating-curve preset of liouville-general:
    /// identity, exponential, or cubic.
    #[arg(long)]
    pub preset: Option<String>,
    /// Phase shift of titeica-sinh.
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    /// Evaluation point.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub u: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub v: f64,
    /// Print a human-readable table instead of JSON.
    #[arg(long)]
    pub pretty: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let start = Instant::now();
    let mut report: Report = match &cli.command {
        Command::Verify(args) => commands::cmd_verify(args)?,
        Command::Surface(args) => commands::cmd_surface(args)?,
        Command::Eval(args) => commands::cmd_eval(args)?,
    };
    report.timing_ms = start.elapsed().as_millis() as u64;

    let json = report.render_json();
    if let Command::Verify(args) = &cli.command {
        if let Some(path) = &args.out {
            std::fs::write(path, format!("{json}\n"))
                .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
        }
    }

    let pretty = match &cli.command {
        Command::Verify(args) => args.pretty,
        Command::Surface(args) => args.pretty,
        Command::Eval(args) => args.pretty,
    };
    if pretty {
        print!("{}", report.render_table());
    } else {
        println!("{json}");
    }
    Ok(report.all_passed())
}
