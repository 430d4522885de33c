use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "logrank",
    version,
    about = "Approximate duality, monochromatic rectangles and protocol trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a matrix file from a named family.
    GenMatrix(GenMatrixArgs),
    /// Write a set file from a named family.
    GenSets(GenSetsArgs),
    /// Ranks, discrepancy and a biased submatrix of a matrix.
    Analyze(MatrixArgs),
    /// F2 factorization M = <a_i, b_j> of the deduplicated matrix.
    Factor(MatrixArgs),
    /// Dual pair for two set files.
    Dual(DualArgs),
    /// Large monochromatic rectangle of a matrix.
    Mono(MonoArgs),
    /// Build a protocol tree for a matrix.
    Protocol(ProtocolArgs),
    /// Check a protocol tree against a matrix.
    Verify(VerifyArgs),
    /// Run a named experiment.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Seed for every random choice of this invocation.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub exact_cap: usize,
    #[arg(long, default_value_t = 20)]
    pub dense_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (stdout when absent).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Add wall-clock timings to the report (output is then not reproducible).
    #[arg(long)]
    #[serde(skip)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixFamily {
    Ip,
    RandomF2Rank,
    RandomDense,
    RandomRealRank,
    FromSets,
}

#[derive(Debug, Args)]
pub struct GenMatrixArgs {
    #[arg(value_enum)]
    pub family: MatrixFamily,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Density of ones for `random-dense`.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Row set file for `from-sets`.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Column set file for `from-sets`.
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetFamily {
    WeightSlice,
    Subspace,
    SubspacePlusNoise,
    Random,
}

#[derive(Debug, Args)]
pub struct GenSetsArgs {
    #[arg(value_enum)]
    pub family: SetFamily,
    #[arg(long)]
    pub n: usize,
    /// Weight for `weight-slice`.
    #[arg(long)]
    pub w: Option<usize>,
    /// Dimension for the subspace families.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub outliers: usize,
    /// Size for `random`.
    #[arg(long)]
    pub size: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    pub matrix: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualStrategy {
    Pipeline,
    Exact,
    Greedy,
}

#[derive(Debug, Args)]
pub struct DualArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, value_enum, default_value_t = DualStrategy::Pipeline)]
    pub strategy: DualStrategy,
    /// Growth threshold K of the sumset sequence, e.g. `4` or `7/2`.
    #[arg(long = "K")]
    pub big_k: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonoStrategy {
    Exact,
    Greedy,
    ViaDual,
}

#[derive(Debug, Args)]
pub struct MonoArgs {
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = MonoStrategy::Exact)]
    pub strategy: MonoStrategy,
    #[arg(long = "K")]
    pub big_k: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = MonoStrategy::Exact)]
    pub strategy: MonoStrategy,
    #[arg(long = "K")]
    pub big_k: Option<String>,
    /// Where to write the tree JSON.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub tree: PathBuf,
    pub matrix: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    DualPipeline,
    LogRankSweep,
    Counterexample,
    Doubling,
    NwBias,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: Experiment,
    /// Dimension(s); repeat for experiments that sweep `n`.
    #[arg(long)]
    pub n: Vec<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    /// Largest target rank.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub instances: Option<usize>,
    /// Slice weight for `counterexample`.
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long = "K")]
    pub big_k: Option<String>,
    #[arg(long, value_enum)]
    pub strategy: Option<MonoStrategy>,
    #[command(flatten)]
    pub common: Common,
}
