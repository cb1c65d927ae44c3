use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use sinica::{NonlinearityKind, SourceSpec};

#[derive(Debug, Parser)]
#[command(
    name = "sinica",
    version,
    about = "Blind source separation with deflationary FastICA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate standardized synthetic sources
    Gen(GenArgs),
    /// Mix sources with a given or random mixing matrix
    Mix(MixArgs),
    /// Separate mixtures into independent components
    Separate(SeparateArgs),
    /// Average accuracy and runtime over seeded repeats per nonlinearity
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Source recipe, e.g. sine:100, sawtooth:173, square:64, uniform:42, laplacian:7
    #[arg(long = "spec", required = true, num_args = 1.., value_parser = parse_spec)]
    pub specs: Vec<SourceSpec>,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mixing").required(true).args(["matrix", "seed"])))]
pub struct MixArgs {
    /// Sources as one CSV, one WAV, or one PGM per source
    #[arg(long, required = true, num_args = 1..)]
    pub sources: Vec<PathBuf>,
    /// Mixing matrix as CSV
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Seed for a random mixing matrix
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Where to store the mixing matrix that was used
    #[arg(long)]
    pub save_matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeparateArgs {
    /// Mixtures as CSV (one channel per row) or 16-bit WAV
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub components: usize,
    #[arg(long, value_parser = parse_kind)]
    pub nonlinearity: NonlinearityKind,
    #[arg(long, default_value_t = sinica::FastIcaConfig::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long = "max-iter", default_value_t = sinica::FastIcaConfig::DEFAULT_MAX_ITERATIONS)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Estimates as CSV or WAV (WAV channels are peak-normalized)
    #[arg(long)]
    pub out: PathBuf,
    /// True sources, for scoring the estimates
    #[arg(long, num_args = 1..)]
    pub sources: Option<Vec<PathBuf>>,
    /// JSON file receiving run statistics
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Sources as one CSV, one WAV, or one PGM per source
    #[arg(long, required = true, num_args = 1..)]
    pub sources: Vec<PathBuf>,
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub repeats: usize,
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_kind,
        default_value = "tanh,gauss,pow3,sin"
    )]
    pub nonlinearities: Vec<NonlinearityKind>,
    /// Base seed; repeat r uses seed + r
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = sinica::FastIcaConfig::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long = "max-iter", default_value_t = sinica::FastIcaConfig::DEFAULT_MAX_ITERATIONS)]
    pub max_iter: usize,
    /// Report as CSV or JSON, chosen by extension
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub label: Option<String>,
}

fn parse_spec(s: &str) -> Result<SourceSpec, String> {
    s.parse().map_err(|e: sinica::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<NonlinearityKind, String> {
    s.parse().map_err(|e: sinica::Error| e.to_string())
}
