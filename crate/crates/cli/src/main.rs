use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod svg;

/// Diversity-multiplexing tradeoff of the MIMO half-duplex relay channel.
#[derive(Debug, Parser)]
#[command(name = "dmt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Corner points of DMT curves.
    Curve(CurveArgs),
    /// Solve one diversity-order program.
    Solve(SolveArgs),
    /// Monte Carlo outage probabilities and the fitted diversity slope.
    Simulate(SimulateArgs),
    /// Monte Carlo estimate of a spherical integral over a P grid.
    Spherical(SphericalArgs),
    /// Run verification checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveMode {
    /// Closed-form symmetric half-duplex curve (p = n).
    HdAnalytic,
    /// Half-duplex curve from the LP solver.
    HdSolver,
    /// Full-duplex relay.
    Fd,
    /// Point-to-point p x n link.
    Ptp,
}

impl CurveMode {
    pub fn name(self) -> &'static str {
        match self {
            CurveMode::HdAnalytic => "hd-analytic",
            CurveMode::HdSolver => "hd-solver",
            CurveMode::Fd => "fd",
            CurveMode::Ptp => "ptp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutArg {
    Source,
    #[value(alias = "destination")]
    Dest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    All,
    Witness,
    Oracle,
    Haar,
    Lemma1,
    Covariance,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(short)]
    pub p: usize,
    /// Relay antennas; not needed for ptp.
    #[arg(short)]
    pub m: Option<usize>,
    #[arg(short)]
    pub n: usize,
    /// Curve to compute; repeat to overlay several.
    #[arg(long = "mode", value_enum, required = true)]
    pub modes: Vec<CurveMode>,
    /// Multiplexing grid step for hd-solver: 0.5, 0.25 or 0.125.
    #[arg(long, default_value_t = 0.25)]
    pub r_step: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(short)]
    pub p: usize,
    #[arg(short)]
    pub m: usize,
    #[arg(short)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub cut: CutArg,
    /// Listening fraction of the relay.
    #[arg(short, default_value_t = 0.5)]
    pub t: f64,
    /// Multiplexing gain.
    #[arg(short)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(short)]
    pub p: usize,
    #[arg(short)]
    pub m: usize,
    #[arg(short)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = CutArg::Dest)]
    pub cut: CutArg,
    #[arg(short, default_value_t = 0.5)]
    pub t: f64,
    #[arg(short)]
    pub r: f64,
    /// Comma-separated SNR points in dB.
    #[arg(long, value_delimiter = ',', default_value = "10,15,20,25,30,35,40")]
    pub snr_db: Vec<f64>,
    /// Trials per SNR point.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: usize,
    #[arg(long, env = "DMT_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SphericalArgs {
    #[arg(short)]
    pub n: usize,
    #[arg(short)]
    pub p: usize,
    #[arg(short)]
    pub m: usize,
    /// Comma-separated, non-decreasing, length n ∧ p.
    #[arg(long = "alpha", value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub alphas: Vec<f64>,
    /// Comma-separated, non-decreasing, length n ∧ m.
    #[arg(long = "beta", value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub betas: Vec<f64>,
    /// Comma-separated values of P (linear scale).
    #[arg(long = "power", value_delimiter = ',', default_value = "100,1000,10000,100000,1000000")]
    pub powers: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: usize,
    #[arg(long, env = "DMT_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Scope::All)]
    pub scope: Scope,
    #[arg(long, env = "DMT_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[command(flatten)]
    pub common: Common,
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        Self { code: 1, message: format!("I/O error: {e}") }
    }
}

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INSUFFICIENT_DATA: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curve(a) => commands::curve(&a),
        Command::Solve(a) => commands::solve(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Spherical(a) => commands::spherical(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
