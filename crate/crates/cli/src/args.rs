use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xirp::generators::Family;
use xirp::metrics::{InversionTag, Metric};
use xirp::RepresentationKind;

#[derive(Debug, Parser)]
#[command(name = "xirp", version, about = "Encode time series as images and invert them back")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded synthetic dataset: one CSV per series plus manifest.json.
    Generate(GenerateArgs),
    /// Truncate, scale, window and encode a series into a tensor file.
    Encode(EncodeArgs),
    /// Invert every image of a tensor file back to (unscaled) windows.
    Invert(InvertArgs),
    /// Compare inverted windows against the windows of the original series.
    Compare(CompareArgs),
    /// Aggregate a score table into summary, best-count, rank or improvement tables.
    Aggregate(AggregateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Sine,
    NoisySine,
    Ar1,
    Brownian,
    #[value(alias = "merton")]
    MertonJump,
    PowerLaw,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Sine => Family::Sine,
            FamilyArg::NoisySine => Family::NoisySine,
            FamilyArg::Ar1 => Family::Ar1,
            FamilyArg::Brownian => Family::Brownian,
            FamilyArg::MertonJump => Family::MertonJump,
            FamilyArg::PowerLaw => Family::PowerLaw,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub family: FamilyArg,
    /// Number of series; defaults to the family's benchmark size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Observations per series, capped at 1000.
    #[arg(long = "len", default_value_t = 1000)]
    pub length: usize,
    /// Base seed; series k uses seed + k.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides one process parameter for every series, e.g. `volatility=0.5`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    BinaryRp,
    Urp,
    Irp,
    Xirp,
    Gasf,
    Naive,
}

impl KindArg {
    pub fn to_kind(self, epsilon: f64) -> RepresentationKind {
        match self {
            KindArg::BinaryRp => RepresentationKind::BinaryRp { epsilon },
            KindArg::Urp => RepresentationKind::Urp,
            KindArg::Irp => RepresentationKind::Irp,
            KindArg::Xirp => RepresentationKind::Xirp,
            KindArg::Gasf => RepresentationKind::Gasf,
            KindArg::Naive => RepresentationKind::Naive,
        }
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Series CSV: a single `value` column, header optional.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Recurrence threshold, used by binary-rp only.
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    /// Window length, which is also the image side.
    #[arg(short = 'd', long = "window", default_value_t = 20)]
    pub window: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Keep at most this many leading observations.
    #[arg(long, default_value_t = xirp::preprocessing::DEFAULT_LIMIT)]
    pub limit: usize,
    /// Target range for irp and xirp scaling.
    #[arg(long, value_delimiter = ',', num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.1, 1.0])]
    pub positive_range: Vec<f64>,
    /// Fit the scaler on this leading fraction of the truncated series.
    #[arg(long, default_value_t = 1.0)]
    pub fit_fraction: f64,
    /// Tensor file; the sidecar goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Diagonal,
    Im,
    Irc,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Tensor file with its `.meta.json` sidecar.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Base seed for irc; window k uses seed + k.
    #[arg(long, required_if_eq("method", "irc"))]
    pub seed: Option<u64>,
    /// Make each image self-consistent before inverting.
    #[arg(long)]
    pub repair: bool,
    /// Average xirp columns geometrically under im.
    #[arg(long)]
    pub geometric: bool,
    /// Output CSV, one row per window.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// CSV written by `invert`.
    #[arg(long)]
    pub inverted: PathBuf,
    /// Series CSV the tensor was encoded from.
    #[arg(long)]
    pub original: PathBuf,
    /// Tensor file whose sidecar holds the window settings.
    #[arg(long)]
    pub tensor: PathBuf,
    /// Exit with a data error when the max error exceeds this.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Summary,
    Best,
    Ranks,
    Improvement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    /// Score CSV: dataset,series_id,contender,metric,inversion,value[,fold].
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long)]
    pub dataset: Option<String>,
    /// `S_D` or `S_P`.
    #[arg(long)]
    pub metric: Option<Metric>,
    /// `diagonal`, `im` or `irc`; untagged records always match.
    #[arg(long)]
    pub inversion: Option<InversionTag>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
