//! `dampcheck`: command-line checks for the damped harmonic oscillator.
//!
//! Exit codes: 0 = check passed or files written, 1 = a violation was
//! detected, 2 = invalid input.

mod commands;
mod demo;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dampcheck", version, about = "Verification checks for the damped 1D harmonic oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the damping regime and print the pseudo-frequency or decay split.
    Classify(ClassifyArgs),
    /// Substitute a closed-form curve into an equation of motion.
    Residual(ResidualArgs),
    /// Measure how well an invariant is conserved along a trajectory.
    Conserve(ConserveArgs),
    /// Evaluate an invariant over the phase plane and export CSV/SVG.
    Field(FieldArgs),
    /// Reproduce the seven errors of the circular-decay analysis as a pass/fail report.
    DemoErrors(DemoArgs),
}

#[derive(clap::Args, Debug, Clone, Copy)]
pub struct OscArgs {
    /// Natural frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
    /// Damping coefficient.
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
}

#[derive(clap::Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub osc: OscArgs,
    /// Relative band around the undamped and critical boundaries.
    #[arg(long, default_value_t = dampcheck::oscillator::DEFAULT_REGIME_TOL)]
    pub tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveArg {
    /// x = e^{-gamma t} cos(t + phi), p = e^{-gamma t} sin(t + phi).
    LiuClaimed,
    /// The exact solution for the regime of (omega0, gamma) through (x0, p0).
    Corrected,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConventionArg {
    /// dp/dt = -x - gamma p (omega0 = 1).
    Liu,
    /// dp/dt = -omega0^2 x - 2 gamma p.
    Zimmer,
}

impl From<ConventionArg> for dampcheck::dynamics::Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Liu => Self::LiuEq1,
            ConventionArg::Zimmer => Self::ZimmerCorrected,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeArg {
    Analytic,
    FiniteDifference,
}

#[derive(clap::Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ResidualArgs {
    #[arg(long, value_enum, default_value_t = CurveArg::Corrected)]
    pub curve: CurveArg,
    #[command(flatten)]
    pub osc: OscArgs,
    #[arg(long, value_enum, default_value_t = ConventionArg::Zimmer)]
    pub convention: ConventionArg,
    /// Phase of the liu-claimed curve.
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Initial position of the corrected curve.
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    /// Initial momentum of the corrected curve.
    #[arg(long, default_value_t = 0.0)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t_start: f64,
    #[arg(long, default_value_t = 20.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = dampcheck::dynamics::DEFAULT_RESIDUAL_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = DerivativeArg::Analytic)]
    pub derivatives: DerivativeArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesInvariant {
    /// Constant of motion of the standard equation, phase continued along the path.
    R,
    /// H1 with the principal angle only.
    H1Naive,
    /// H1 with the angle continued across Riemann sheets.
    H1Unwrapped,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceArg {
    /// liu-curve for h1-unwrapped, rk4 otherwise.
    Auto,
    /// RK4 integration of the selected convention from (x0, p0).
    Rk4,
    /// The liu-claimed curve sampled every dt.
    LiuCurve,
}

#[derive(clap::Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ConserveArgs {
    #[arg(long, value_enum)]
    pub invariant: SeriesInvariant,
    #[command(flatten)]
    pub osc: OscArgs,
    #[arg(long, value_enum, default_value_t = SourceArg::Auto)]
    pub source: SourceArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::Zimmer)]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p0: f64,
    /// Phase of the liu-claimed curve.
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    /// Defaults to 10 pseudo-periods for RK4 and 10 for the liu curve.
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Largest accepted |I(t) - I(0)|.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    /// Write the series as `t,value` CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldInvariant {
    H1,
    CosH1,
    GammaH1,
    R,
}

impl From<FieldInvariant> for dampcheck::invariants::PointInvariant {
    fn from(f: FieldInvariant) -> Self {
        match f {
            FieldInvariant::H1 => Self::H1Naive,
            FieldInvariant::CosH1 => Self::CosH1,
            FieldInvariant::GammaH1 => Self::GammaH1,
            FieldInvariant::R => Self::RPoint,
        }
    }
}

#[derive(clap::Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct FieldArgs {
    #[arg(long, value_enum, default_value_t = FieldInvariant::H1)]
    pub invariant: FieldInvariant,
    #[command(flatten)]
    pub osc: OscArgs,
    #[arg(long, default_value_t = -2.0)]
    pub x_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub x_max: f64,
    #[arg(long, default_value_t = -2.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 401)]
    pub nx: usize,
    #[arg(long, default_value_t = 401)]
    pub ny: usize,
    /// CSV output path.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// SVG heatmap output path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct DemoArgs {
    /// Damping used by every section (0 < gamma < 1).
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Also write the H1 / cos H1 field pair (CSV and SVG) into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(args) => commands::classify(&args),
        Command::Residual(args) => commands::residual(&args),
        Command::Conserve(args) => commands::conserve(&args),
        Command::Field(args) => commands::field(&args),
        Command::DemoErrors(args) => demo::run(&args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
