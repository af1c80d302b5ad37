//! `qpt`: gate observables of the transverse-field XY chain from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{ArgGroup, Args, CommandFactory, Parser, Subcommand};
use qpt_core::criticality::{Law, Spacing};
use qpt_core::verify::{Suite, DEFAULT_SEED};
use qpt_core::{Axis, Error, LatticeSpec};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qpt",
    version,
    about = "Gate observables and critical scaling of the transverse-field XY chain"
)]
#[command(args_override_self = true, allow_negative_numbers = true)]
struct Cli {
    /// Plain key = value file supplying defaults for the subcommand's flags
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<String>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Ground-state correlators m_z, g_xx, g_yy, g_xzx, g_yzy
    Correlators(PointArgs),
    /// Energy gaps of the three Pauli gates
    Gaps(PointArgs),
    /// Short-time accelerations of the three Pauli gates
    Accel(PointArgs),
    /// Evolved on-site magnetization after a gate, with its quadratic fit
    Dynamics(DynamicsArgs),
    /// Observables and their lambda-derivatives along a line of couplings, as CSV
    Sweep(SweepArgs),
    /// Fit a divergence law to an observable's derivative near lambda = 1
    Fit(FitArgs),
    /// Log-law coefficients of the gaps and accelerations for several anisotropies, as CSV
    Report(ReportArgs),
    /// Run the identity, symmetry and oracle checks
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
#[command(group(ArgGroup::new("lattice").required(true).multiple(false)))]
pub struct PointArgs {
    /// Anisotropy in [0, 1]
    #[arg(long)]
    pub gamma: f64,
    /// Reduced coupling, > 0
    #[arg(long)]
    pub lambda: f64,
    /// Periodic ring of N sites, solved by exact diagonalization
    #[arg(long, value_name = "N", group = "lattice")]
    pub size: Option<usize>,
    /// Thermodynamic limit, solved by quadrature
    #[arg(long, group = "lattice")]
    pub thermo: bool,
}

impl PointArgs {
    pub fn lattice(&self) -> LatticeSpec {
        match self.size {
            Some(n) => LatticeSpec::Finite(n),
            None => LatticeSpec::Thermodynamic,
        }
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct DynamicsArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, value_name = "N")]
    pub size: usize,
    /// Gate applied at site 0 before the evolution
    #[arg(long, value_parser = parse_core::<Axis>)]
    pub axis: Axis,
    /// Final time; defaults to 0.01 / lambda
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Number of time steps after tau = 0
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub lambda_min: f64,
    #[arg(long)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// linear, or log (geometric toward lambda = 1)
    #[arg(long, default_value = "linear", value_parser = parse_core::<Spacing>)]
    pub spacing: Spacing,
    /// Comma-separated names (dEx, Lz, mz, gxx, ...) or the groups all, gaps, accels, correlators
    #[arg(long, default_value = "all")]
    pub observables: String,
    /// Add the lambda-derivative column
    #[arg(long)]
    pub derivative: bool,
    /// Closest approach to lambda = 1 for log spacing
    #[arg(long)]
    pub log_floor: Option<f64>,
    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub output: Option<String>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct FitArgs {
    #[arg(long)]
    pub gamma: f64,
    /// log or invsqrt
    #[arg(long, default_value = "log", value_parser = parse_core::<Law>)]
    pub law: Law,
    /// Observable whose derivative is fitted
    #[arg(long)]
    pub target: String,
    /// below, above or best (smaller standard error); invsqrt always uses above
    #[arg(long, default_value = "best")]
    pub side: String,
    /// Smallest |lambda - 1| of the window
    #[arg(long)]
    pub window_min: Option<f64>,
    /// Largest |lambda - 1| of the window
    #[arg(long)]
    pub window_max: Option<f64>,
    /// Number of geometrically spaced samples in the window
    #[arg(long)]
    pub window_points: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Comma-separated anisotropies in (0, 1]
    #[arg(long, default_value = "0.25,0.5,0.75,0.9,1")]
    pub gammas: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// identities, symmetry, oracle or all
    #[arg(long, default_value = "all", value_parser = parse_core::<Suite>)]
    pub suite: Suite,
    /// Seed of the randomized identity grid
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

fn parse_core<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a command, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(std::io::Error),
    Verify(usize),
    Sweep { failed: usize, points: usize },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_validation() => EXIT_INPUT,
            Failure::Core(_) | Failure::Sweep { .. } => EXIT_NUMERIC,
            Failure::Io(_) => EXIT_INPUT,
            Failure::Verify(_) => EXIT_VERIFY,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => format!("io: {e}"),
            Failure::Verify(n) => format!("{n} verification check(s) failed"),
            Failure::Sweep { failed, points } => {
                format!("{failed} of {points} sweep points failed, more than 10%")
            }
        }
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("QPT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("QPT_THREADS = `{raw}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("QPT_THREADS: {e}")))
}

fn parse_cli() -> Result<Cli, Failure> {
    let args: Vec<String> = std::env::args().collect();
    let args = match config::config_path(&args) {
        Some(path) => config::merge(Cli::command(), &args, &config::load(&path)?)?,
        None => args,
    };
    Ok(Cli::try_parse_from(args).unwrap_or_else(|e| e.exit()))
}

fn main() -> ExitCode {
    let result = configure_threads()
        .map_err(Failure::from)
        .and_then(|()| parse_cli())
        .and_then(|cli| commands::run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
