//! `qspeed`: statistical speeds, distances, bounds and Monte Carlo checks from JSON inputs.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "qspeed", version, about = "Statistical speeds of parametrized quantum states")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Seed for every randomised computation.
    #[arg(long, global = true, env = "QSPEED_SEED", default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace speed, quantum Fisher information and Schatten speeds of a family.
    Speed(SpeedArgs),
    /// Trace, Bures and Schatten distances between two states.
    Distance(DistanceArgs),
    /// Compare a speed with a separability limit.
    Witness(WitnessArgs),
    /// Heisenberg, separability and non-Hermitian bounds.
    Bound(BoundArgs),
    /// Monte Carlo estimation checks.
    Estimate(EstimateArgs),
    /// Brute-force measurement search next to the closed form.
    Oracle(OracleArgs),
    /// Check the invariants of an input file.
    Validate { path: PathBuf },
}

#[derive(Args, Debug)]
pub struct SpeedArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Also print the measurement attaining the chosen target.
    #[arg(long)]
    pub povm: bool,
    #[arg(long, value_enum, default_value = "trace")]
    pub povm_target: PovmTargetArg,
    /// Restarts for the generalized Fisher estimate at orders other than 1 and 2.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PovmTargetArg {
    Trace,
    Schatten,
    Qfi,
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    #[arg(long)]
    pub rho: PathBuf,
    #[arg(long)]
    pub sigma: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WitnessKind {
    Ksep,
    Asep,
    Local,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum)]
    pub bound: WitnessKind,
    /// Block size for the k-separable limit.
    #[arg(long)]
    pub k: Option<usize>,
    /// Partition file for the state-dependent limit.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Local generator files (hermitian, superoperator or non_hermitian_generator).
    #[arg(long = "generator")]
    pub generators: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum BoundKind {
    Heisenberg,
    Ksep,
    Asep,
    Nonhermitian,
    Local,
    BhatiaDavis,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub kind: BoundKind,
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long)]
    pub gamma: Option<PathBuf>,
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long = "generator")]
    pub generators: Vec<PathBuf>,
    /// Repeat each generator this many times (identical local terms).
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum EstimateTask {
    Discrimination,
    Median,
    MedianCheck,
    Normality,
    CramerRao,
    QuantumMedian,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EstimatorArg {
    Mean,
    Median,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long, value_enum)]
    pub task: EstimateTask,
    #[arg(long)]
    pub rho: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<PathBuf>,
    /// Measurement for discrimination; the Helstrom measurement when omitted.
    #[arg(long)]
    pub povm: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// gaussian, cauchy, laplace or exponential.
    #[arg(long, default_value = "gaussian")]
    pub model: String,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, value_enum, default_value = "median")]
    pub estimator: EstimatorArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 101)]
    pub m: usize,
    #[arg(long, default_value_t = 20_000)]
    pub trials: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ObjectiveArg {
    /// f_alpha
    Fisher,
    /// Schatten-type Fisher quantity
    SchattenFisher,
    /// d_alpha against --partner
    Dist,
    /// Schatten-type distance against --partner
    SchattenDist,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "fisher")]
    pub objective: ObjectiveArg,
    #[arg(long)]
    pub partner: Option<PathBuf>,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}

/// Exit status for a failed run: 3 for numerical inconsistency, 2 otherwise.
fn exit_code(e: &qspeed::Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", report::render(&out.report, cli.format));
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
