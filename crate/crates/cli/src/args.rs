use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "overfit-forge", version, about = "Build, extend and certify explicitly weighted overfitting networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a network from one of the construction families.
    Construct(ConstructArgs),
    /// Append hidden layers without changing the function.
    Extend(ExtendArgs),
    /// Evaluate a network at given points.
    Evaluate(EvaluateArgs),
    /// Run optimum, support and dead-zone checks and print a table.
    Verify(VerifyArgs),
    /// Estimate the measure of the region where the output is non-zero.
    Support(SupportArgs),
    /// Probe points far from the training grid.
    DeadZone(DeadZoneArgs),
    /// Write CSV curves or rasters of a network for plotting.
    PlotData(PlotArgs),
    /// Image-classifier accuracy over ground-truth images.
    ImageAccuracy(ImageArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    #[value(name = "relu-classifier-1d")]
    ReluClassifier1d,
    ReluClassifierNd,
    #[value(name = "relu-approx-1d")]
    ReluApprox1d,
    ReluApproxNd,
    ReluImageClassifier,
    #[value(name = "prelu-classifier-1d")]
    PreluClassifier1d,
    PreluClassifierNd,
    #[value(name = "prelu-approx-1d")]
    PreluApprox1d,
    PreluApproxNd,
    #[value(name = "sigmoid-approx-1d")]
    SigmoidApprox1d,
    SigmoidApproxNd,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cost {
    PlusMinusOne,
    CrossEntropy,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub family: Family,
    /// Grid points per dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Input dimension (`-nd` families, default 2).
    #[arg(long)]
    pub d: Option<usize>,
    /// Truncation level; sets both biases of a classifier.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b2: Option<f64>,
    /// Parametric ReLU slope.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Parametric ReLU clip level (default: analytic sup + 1).
    #[arg(long)]
    pub c: Option<f64>,
    /// Sigmoid spike steepness.
    #[arg(long)]
    pub k: Option<f64>,
    /// Sigmoid gate steepness.
    #[arg(long)]
    pub l: Option<f64>,
    /// sin-pi, zero, sum, product or const:<value>.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, value_enum)]
    pub cost: Option<Cost>,
    /// Three private neurons per hat instead of shared knots.
    #[arg(long)]
    pub unshared: bool,
    #[arg(long)]
    pub pixels: Option<usize>,
    /// Grayscale reduction step m.
    #[arg(long)]
    pub step: Option<u32>,
    /// Refuse training sets larger than this.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u128,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Also write the generating training set as CSV.
    #[arg(long)]
    pub data_out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    ReluExact,
    Smooth,
    PreluShift,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarrierActivation {
    Sigmoid,
    Identity,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Number of appended hidden layers.
    #[arg(long)]
    pub m: usize,
    /// Width of every appended layer.
    #[arg(long, conflicts_with = "widths")]
    pub width: Option<usize>,
    /// Comma-separated widths, one per appended layer.
    #[arg(long, value_delimiter = ',')]
    pub widths: Option<Vec<usize>>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Carrier constant (relu-exact, smooth).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Shift constant (prelu-shift).
    #[arg(long)]
    pub shift: Option<f64>,
    /// Slope for prelu-shift layers (default: the network's own, else 0.01).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Activation of the appended layers in smooth mode.
    #[arg(long, value_enum, default_value_t = CarrierActivation::Sigmoid)]
    pub activation: CarrierActivation,
    /// Overrides the output bound recorded in the network.
    #[arg(long)]
    pub output_bound: Option<f64>,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    pub net: PathBuf,
    /// Comma-separated input point; repeatable.
    #[arg(long = "x", allow_hyphen_values = true, action = clap::ArgAction::Append)]
    pub x: Vec<String>,
    /// CSV of points (header row, one point per row; a trailing `y` column is ignored).
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Loss {
    Mse,
    Mae,
    CrossEntropy,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Optimum,
    Support,
    DeadZone,
}

#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    /// Monte Carlo samples.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use midpoint grid sampling with this cell width instead of Monte Carlo.
    #[arg(long)]
    pub resolution: Option<f64>,
    /// `|f|` above this counts as support (default 0, or 1e-3 for sigmoid networks).
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u128,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Training set CSV; defaults to the set recorded in the network metadata.
    #[arg(long)]
    pub data: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub net: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![Check::Optimum, Check::Support, Check::DeadZone])]
    pub checks: Vec<Check>,
    /// Loss for the optimum check (default: mse, cross-entropy for that classifier variant).
    #[arg(long, value_enum)]
    pub loss: Option<Loss>,
    #[arg(long, default_value_t = 1e-12)]
    pub loss_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub residual_tol: f64,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Dead-zone radius (default: the one recorded in the network).
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub probes: u64,
    /// Dead-zone threshold (default 1e-9, or 1e-3 for sigmoid networks).
    #[arg(long)]
    pub dead_threshold: Option<f64>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SupportArgs {
    pub net: PathBuf,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DeadZoneArgs {
    pub net: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub probes: u64,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    pub net: PathBuf,
    /// Cell width of the sampling grid along each free axis.
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    /// Fix one input, e.g. `2=0.5`; repeat until at most two inputs remain free.
    #[arg(long = "slice", action = clap::ArgAction::Append)]
    pub slices: Vec<String>,
    /// Adds a reference column (sin-pi, zero, sum, product, const:<v>).
    #[arg(long)]
    pub reference: Option<String>,
    /// Second network; adds its output and the difference `f - g`.
    #[arg(long)]
    pub against: Option<PathBuf>,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ImageArgs {
    #[arg(long)]
    pub pixels: usize,
    #[arg(long)]
    pub step: u32,
    /// Truncation level (default: P - 0.001).
    #[arg(long)]
    pub b: Option<f64>,
    /// Monte Carlo samples; 0 reports the analytic value only.
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also try to enumerate the full training set.
    #[arg(long)]
    pub enumerate: bool,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u128,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
