use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "zealots",
    version,
    about = "Majority accuracy of voters copying neighbours in the presence of zealots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stationary distribution of the number of correct free voters.
    Pmf(PmfArgs),
    /// Networked and independent majority accuracy side by side.
    Accuracy(AccuracyArgs),
    /// Large-population accuracy 1 − I_{1/2}(α, β).
    Limit(ShapeCommand),
    /// Normal approximation of the large-population accuracy.
    NormalApprox(ShapeCommand),
    /// Monte Carlo run of the copying dynamics.
    Simulate(SimulateArgs),
    /// Checks 1 − I_{1/2}(α, β) > α/(α+β) at one shape or over a grid.
    VerifyProposition(PropositionArgs),
    /// Evaluates both sides of each integral inequality by quadrature.
    VerifyIdentities(ShapeCommand),
    /// Gap between finite-n and large-population accuracy.
    Sweep(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pmf(_) => "pmf",
            Command::Accuracy(_) => "accuracy",
            Command::Limit(_) => "limit",
            Command::NormalApprox(_) => "normal-approx",
            Command::Simulate(_) => "simulate",
            Command::VerifyProposition(_) => "verify-proposition",
            Command::VerifyIdentities(_) => "verify-identities",
            Command::Sweep(_) => "sweep",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Pmf(a) => &a.output,
            Command::Accuracy(a) => &a.output,
            Command::Limit(a) | Command::NormalApprox(a) | Command::VerifyIdentities(a) => &a.output,
            Command::Simulate(a) => &a.output,
            Command::VerifyProposition(a) => &a.output,
            Command::Sweep(a) => &a.output,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    /// Correct zealots (α > 0).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Incorrect zealots (β > 0).
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeCommand {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PmfArgs {
    /// Number of free voters.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A population size or `inf` for the large-population limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopulationArg {
    Finite(usize),
    Infinite,
}

impl FromStr for PopulationArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" | "infinity" => Ok(PopulationArg::Infinite),
            _ => s
                .parse()
                .map(PopulationArg::Finite)
                .map_err(|_| format!("expected a population size or `inf`, got {s:?}")),
        }
    }
}

impl fmt::Display for PopulationArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PopulationArg::Finite(n) => write!(f, "{n}"),
            PopulationArg::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AccuracyArgs {
    /// Comma-separated population sizes; `inf` gives the limit.
    #[arg(long, required = true, value_delimiter = ',')]
    pub n: Vec<PopulationArg>,
    #[arg(
        long,
        requires = "beta",
        required_unless_present = "p",
        allow_negative_numbers = true
    )]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha", allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Independent voters only, each correct with this probability.
    #[arg(long, conflicts_with_all = ["alpha", "beta"], allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Free voters on the complete graph.
    #[arg(long, required_unless_present = "edges", conflicts_with = "edges")]
    pub n: Option<usize>,
    /// Correct zealots on the complete graph.
    #[arg(long, required_unless_present = "edges", conflicts_with = "edges")]
    pub alpha: Option<usize>,
    /// Incorrect zealots on the complete graph.
    #[arg(long, required_unless_present = "edges", conflicts_with = "edges")]
    pub beta: Option<usize>,
    /// Edge-list file with a `#zealots correct=.. incorrect=..` header.
    #[arg(long, value_name = "PATH")]
    pub edges: Option<PathBuf>,
    /// Random seed; drawn from the OS and recorded when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Observations per replica.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Steps discarded before the first observation [default: 50·n·N].
    #[arg(long)]
    pub burn_in: Option<u64>,
    /// Steps between observations [default: n].
    #[arg(long)]
    pub thinning: Option<u64>,
    /// Independent chains, merged by summing counts.
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PropositionArgs {
    /// Check a single shape instead of a grid.
    #[arg(
        long,
        requires = "beta",
        conflicts_with_all = ["grid_min", "grid_max", "grid_step"],
        allow_negative_numbers = true
    )]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha", allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub grid_step: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Strictly increasing population sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [100usize, 1_000, 10_000, 100_000])]
    pub n: Vec<usize>,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
