//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cayley-qmc",
    version,
    about = "Quantum Markov chains of the Ising model on Cayley trees: \
             fixed points, transfer matrices, and phase-transition certification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase-transition threshold theta_c = (k+1)/(k-1) and beta_c
    Critical(CriticalArgs),
    /// Fixed points of the ratio map with their constants and planar points
    FixedPoints(FixedPointsArgs),
    /// Iterate the planar recursion from a starting point
    Trajectory(TrajectoryArgs),
    /// Boundary-condition family: root weight, level fields, residuals
    Boundary(BoundaryArgs),
    /// Evaluate a product observable in a finite-volume state (enumeration)
    Evaluate(EvaluateArgs),
    /// Leaf sigma_z expectation via the transfer-matrix formula
    Correlation(CorrelationArgs),
    /// Quasi-equivalence gap report at one temperature
    Gap(GapArgs),
    /// Phase-diagram rows over a theta value or range (CSV friendly)
    PhaseDiagram(PhaseDiagramArgs),
    /// Run the full invariant suite; exits 0 only if every check passes
    Verify(VerifyArgs),
}

/// Temperature given as exactly one of theta or beta.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct TempArgs {
    /// theta = e^{2 beta}, must be > 1
    #[arg(long)]
    pub theta: Option<f64>,
    /// inverse temperature beta > 0
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Alpha0,
    Alpha,
    Beta,
    Gamma,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    /// branching order of the tree (k >= 2)
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FixedPointsArgs {
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub temp: TempArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub temp: TempArgs,
    /// starting x coordinate (> 0)
    #[arg(long)]
    pub x0: f64,
    /// starting y coordinate (> 0)
    #[arg(long)]
    pub y0: f64,
    /// step cap
    #[arg(long, default_value_t = cayley_qmc::dynamics::DEFAULT_MAX_STEPS)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub temp: TempArgs,
    /// boundary-condition family
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// alpha parameter (required for --kind alpha)
    #[arg(long, required_if_eq("kind", "alpha"))]
    pub alpha: Option<f64>,
    /// deepest level to report the field at
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub temp: TempArgs,
    /// volume level n of Lambda_n
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, required_if_eq("kind", "alpha"))]
    pub alpha: Option<f64>,
    /// observable as "site:P" entries, e.g. "1.1:Z,2:I"; empty = identity
    #[arg(long, default_value = "")]
    pub observable: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CorrelationArgs {
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub temp: TempArgs,
    /// the sigma_z probe sits at the first vertex of level N+1
    #[arg(long = "N")]
    pub level: u32,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, required_if_eq("kind", "alpha"))]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub temp: TempArgs,
    /// level the pointwise gamma value is reported at
    #[arg(long = "N")]
    pub level: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PhaseDiagramArgs {
    #[arg(long)]
    pub k: u32,
    /// single-row theta (alternative to a sweep)
    #[arg(long, conflicts_with_all = ["theta_min", "theta_max", "theta_step", "beta"])]
    pub theta: Option<f64>,
    /// single-row beta (alternative to a sweep)
    #[arg(long, conflicts_with_all = ["theta_min", "theta_max", "theta_step"])]
    pub beta: Option<f64>,
    /// sweep start (inclusive)
    #[arg(long, requires_all = ["theta_max", "theta_step"])]
    pub theta_min: Option<f64>,
    /// sweep end (inclusive up to rounding)
    #[arg(long, requires = "theta_min")]
    pub theta_max: Option<f64>,
    /// sweep step (> 0)
    #[arg(long, requires = "theta_min")]
    pub theta_step: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub temp: TempArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
