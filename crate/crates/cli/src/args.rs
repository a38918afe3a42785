use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xlev::selection::{LeverageOrder, SignMode};
use xlev::{Calibration, Criterion};

#[derive(Debug, Parser)]
#[command(
    name = "xlev",
    version,
    about = "Leverage and cross-leverage variable selection for wide binary data",
    propagate_version = true
)]
pub struct Cli {
    /// File of `key = value` lines supplying any long option of the chosen
    /// subcommand. Options given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for replicate-parallel work; 0 uses one per core.
    /// Results do not depend on this.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leverage and cross-leverage of every variable.
    #[command(args_override_self = true)]
    Scores(ScoresArgs),
    /// Top-k variables under one criterion or the LS/CLS combination.
    #[command(args_override_self = true)]
    Select(SelectArgs),
    /// Draw a dataset from a planted DNF model.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Fit a logic-regression tree, or a bootstrap ensemble of them.
    #[command(name = "fit-logic", args_override_self = true)]
    FitLogic(FitLogicArgs),
    /// Simulation studies.
    #[command(subcommand)]
    Experiment(Study),
    /// Portable-pixmap picture of selected columns, cases on top.
    #[command(args_override_self = true)]
    Raster(RasterArgs),
    /// Drop uninformative columns and impute missing cells.
    #[command(args_override_self = true)]
    Preprocess(PreprocessArgs),
}

#[derive(Debug, Subcommand)]
pub enum Study {
    /// Kernel densities of LS and CLS per variable class.
    #[command(args_override_self = true)]
    Density(DensityArgs),
    /// How many relevant variables each criterion captures in its top k.
    #[command(args_override_self = true)]
    Success(StudyArgs),
    /// Captured proportion over the grid of CLS and LS percentages.
    #[command(args_override_self = true)]
    Grid(StudyArgs),
    /// Reduce, fit a logic-regression ensemble, and score term recovery.
    #[command(args_override_self = true)]
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Comma- or tab-separated table with a header row.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Response column, by header name or 1-based position.
    #[arg(long, default_value = "y", value_name = "COLUMN")]
    pub response: String,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArg {
    /// Destination file; `-` writes to standard output.
    #[arg(long, default_value = "-", value_name = "PATH")]
    pub output: PathBuf,
}

/// Number of variables to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KArg {
    /// `⌈n ln n⌉`.
    Auto,
    Fixed(usize),
}

impl FromStr for KArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(KArg::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("expected `auto` or a positive integer, got {s:?}")),
            Ok(k) => Ok(KArg::Fixed(k)),
        }
    }
}

impl KArg {
    pub fn resolve(self, n: usize) -> xlev::Result<usize> {
        match self {
            KArg::Auto => xlev::sample_size(n),
            KArg::Fixed(k) => Ok(k),
        }
    }

    pub fn as_option(self) -> Option<usize> {
        match self {
            KArg::Auto => None,
            KArg::Fixed(k) => Some(k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Cls,
    Ls,
    Cor,
    Pval,
    Combined,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Cls => Criterion::Cls,
            CriterionArg::Ls => Criterion::Ls,
            CriterionArg::Cor => Criterion::Cor,
            CriterionArg::Pval => Criterion::Pval,
            CriterionArg::Combined => Criterion::Combined,
        }
    }
}

/// Single criteria only; used where a combination makes no sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleArg {
    Cls,
    Ls,
    Cor,
    Pval,
}

impl From<SingleArg> for Criterion {
    fn from(c: SingleArg) -> Self {
        match c {
            SingleArg::Cls => Criterion::Cls,
            SingleArg::Ls => Criterion::Ls,
            SingleArg::Cor => Criterion::Cor,
            SingleArg::Pval => Criterion::Pval,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Absolute,
    Signed,
}

impl From<SignArg> for SignMode {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Absolute => SignMode::Absolute,
            SignArg::Signed => SignMode::SignedDescending,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Ascending,
    Descending,
}

impl From<OrderArg> for LeverageOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Ascending => LeverageOrder::Ascending,
            OrderArg::Descending => LeverageOrder::Descending,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CombinedModeArg {
    /// Top CLS percentage together with top LS percentage.
    Union,
    /// LS percentage first, then the best CLS among the rest up to `--total`.
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CalibrationArg {
    /// Every term fires equally often.
    EqualTerm,
    /// One probability shared by all relevant variables.
    Uniform,
}

impl From<CalibrationArg> for Calibration {
    fn from(c: CalibrationArg) -> Self {
        match c {
            CalibrationArg::EqualTerm => Calibration::EqualTerm,
            CalibrationArg::Uniform => Calibration::Uniform,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScoresArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArg,
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArg,
    #[arg(long, value_enum, default_value = "ls")]
    pub criterion: CriterionArg,
    /// Variables to keep: `auto` for ⌈n ln n⌉, or a count.
    #[arg(long, default_value = "auto", value_name = "auto|N")]
    pub k: KArg,
    #[arg(long, value_enum, default_value = "absolute")]
    pub cls_mode: SignArg,
    #[arg(long, value_enum, default_value = "ascending")]
    pub ls_order: OrderArg,
    #[arg(long, value_enum, default_value = "absolute")]
    pub cor_mode: SignArg,
    /// Combined criterion: fraction of variables taken by CLS, in [0, 1].
    #[arg(long, value_name = "F")]
    pub pct_cls: Option<f64>,
    /// Combined criterion: fraction of variables taken by LS, in [0, 1].
    #[arg(long, value_name = "F")]
    pub pct_ls: Option<f64>,
    #[arg(long, value_enum, default_value = "union")]
    pub combined_mode: CombinedModeArg,
    /// Sequential mode: total kept; defaults to the resolved `--k`.
    #[arg(long, value_name = "N")]
    pub total: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Built-in scenario 1, 2 or 3.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub scenario: u8,
    /// Custom planted terms (one per line, comma-separated 1-based
    /// indices); replaces `--scenario`.
    #[arg(long, value_name = "FILE")]
    pub terms: Option<PathBuf>,
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub p: usize,
    #[arg(long, value_enum, default_value = "equal-term")]
    pub calibration: CalibrationArg,
    /// Target case proportion used for calibration.
    #[arg(long, default_value_t = 0.5)]
    pub prevalence: f64,
    /// Probability of flipping each label after DNF labeling.
    #[arg(long, default_value_t = 0.0)]
    pub flip_prob: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArg,
}

#[derive(Debug, Clone, Args)]
pub struct AnnealArgs {
    /// Maximum leaves per tree.
    #[arg(long, default_value_t = 30)]
    pub nleaves_max: usize,
    #[arg(long, default_value_t = 50_000)]
    pub iterations: usize,
    /// Starting temperature; derived from the initial score when absent.
    #[arg(long, value_name = "T")]
    pub t_start: Option<f64>,
    /// Geometric cooling ratio per iteration.
    #[arg(long, default_value_t = 0.999)]
    pub cooling: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FitLogicArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArg,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bootstrap models; 1 fits a single tree on the full data.
    #[arg(long, default_value_t = 1)]
    pub bootstraps: usize,
    /// Reduce the variables by this criterion before fitting.
    #[arg(long, value_enum, value_name = "CRITERION")]
    pub reduce: Option<SingleArg>,
    /// Variables kept by `--reduce`.
    #[arg(long, default_value = "auto", value_name = "auto|N")]
    pub k: KArg,
}

#[derive(Debug, Clone, Args)]
pub struct RasterArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Destination `.ppm` file; `-` writes to standard output.
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    /// Comma-separated 1-based column positions to draw.
    #[arg(long, value_delimiter = ',', value_name = "LIST", conflicts_with = "reduce")]
    pub columns: Vec<usize>,
    /// Draw the top-k columns under this criterion instead.
    #[arg(long, value_enum, value_name = "CRITERION")]
    pub reduce: Option<SingleArg>,
    #[arg(long, default_value = "auto", value_name = "auto|N")]
    pub k: KArg,
}

#[derive(Debug, Clone, Args)]
pub struct PreprocessArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Cleaned comma-separated table; `-` writes to standard output.
    #[arg(long, default_value = "-", value_name = "PATH")]
    pub output: PathBuf,
    /// Tab-separated summary of dropped columns and imputation counts.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Seed of the imputation draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drop every constant column, not only all-zero ones.
    #[arg(long)]
    pub zero_variance: bool,
}

#[derive(Debug, Clone, Args)]
pub struct StudyArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub scenario: u8,
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub p: usize,
    /// Replicates; defaults to 500, or 10000 with `--full-scale`.
    #[arg(long, conflicts_with = "full_scale")]
    pub replicates: Option<usize>,
    /// Run the full 10000 replicates.
    #[arg(long)]
    pub full_scale: bool,
    #[arg(long, default_value = "auto", value_name = "auto|N")]
    pub k: KArg,
    /// Criteria compared, comma-separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "cls,ls,cor,pval")]
    pub criteria: Vec<SingleArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "equal-term")]
    pub calibration: CalibrationArg,
    /// Directory receiving the result tables.
    #[arg(long, default_value = ".", value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub study: StudyArgs,
    /// Grid points per density curve.
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    /// Also write every pooled score.
    #[arg(long)]
    pub samples: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub study: StudyArgs,
    #[command(flatten)]
    pub anneal: AnnealArgs,
    /// Seed of the annealing runs; replicate `r` uses `anneal_seed ^ r`.
    #[arg(long, default_value_t = 0)]
    pub anneal_seed: u64,
    /// Bootstrap models per method and replicate.
    #[arg(long, default_value_t = 20)]
    pub bootstraps: usize,
    /// LS share of the combined method; the rest of k goes to CLS.
    #[arg(long, default_value_t = 100)]
    pub combined_ls: usize,
}
