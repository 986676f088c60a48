//! `mixmood`: dataset dissimilarity, candidate ranking and the synthetic
//! MixMatch demo from the command line.
//!
//! JSON and CSV results go to standard output (or `--output`), diagnostics
//! to standard error. Exit codes: 0 success, 1 I/O failure, 2 invalid input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixmood::dedims::{DEFAULT_BINS, DEFAULT_ROUNDS, DEFAULT_TAU};
use mixmood::{DedimParams, Measure, Seed};

#[derive(Parser, Debug)]
#[command(name = "mixmood", version, about = "Deep dataset dissimilarity measures and unlabelled-set ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Turn an image stack (IMGB file or PNG directory) into an FMAT feature matrix.
    Featurize(FeaturizeArgs),
    /// Distance between a labelled and an unlabelled feature matrix.
    Distance(DistanceArgs),
    /// Rank candidate unlabelled feature matrices by distance to the labelled one.
    Rank(RankArgs),
    /// Pearson correlation of published distances against SSDL accuracy.
    Correlate(CorrelateArgs),
    /// Generate a synthetic noise image stack.
    GenNoise(GenNoiseArgs),
    /// Train the synthetic MixMatch demo from a JSON config.
    SsdlDemo(DemoArgs),
}

#[derive(Args, Debug, Clone)]
struct DedimFlags {
    #[arg(long, default_value = "cos")]
    measure: Measure,
    /// Rows subsampled from each set per round.
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: usize,
    #[arg(long, default_value_t = DEFAULT_ROUNDS)]
    rounds: usize,
    /// Histogram bins for the density measures.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the rounds; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl DedimFlags {
    fn params(&self) -> DedimParams {
        DedimParams {
            measure: self.measure,
            tau: self.tau,
            rounds: self.rounds,
            bins: self.bins,
            seed: Seed(self.seed),
        }
    }
}

#[derive(Args, Debug)]
struct DistanceArgs {
    labelled: PathBuf,
    unlabelled: PathBuf,
    #[command(flatten)]
    dedim: DedimFlags,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RankArgs {
    labelled: PathBuf,
    /// Candidates as `PATH` or `NAME=PATH`; the name defaults to the file stem.
    #[arg(required = true)]
    candidates: Vec<String>,
    #[command(flatten)]
    dedim: DedimFlags,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CorrelateArgs {
    /// Accuracy table CSV; defaults to the bundled table.
    #[arg(long, requires = "distances")]
    accuracies: Option<PathBuf>,
    /// Distance table CSV; defaults to the bundled table.
    #[arg(long, requires = "accuracies")]
    distances: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExtractorKind {
    Flatten,
    Randproj,
    Model,
}

#[derive(Args, Debug)]
struct FeaturizeArgs {
    /// IMGB file or directory of PNG images.
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "flatten")]
    extractor: ExtractorKind,
    /// ONNX model for `--extractor model`.
    #[arg(long)]
    model_path: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    out_dim: usize,
    /// Seed of the random projection.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Resample images to `HxW` (or `N` for square) before standardizing.
    #[arg(long)]
    resize: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum NoiseKind {
    Gaussian,
    Sap,
}

#[derive(Args, Debug)]
struct GenNoiseArgs {
    #[arg(value_enum)]
    kind: NoiseKind,
    #[arg(short, long)]
    n: usize,
    /// Side length of the square images.
    #[arg(long, default_value_t = mixmood::featurize::NOISE_IMAGE_SIZE)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct DemoArgs {
    config: PathBuf,
    /// Per-epoch metrics CSV (`epoch,test_accuracy`).
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// JSON summary path; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Consistency term without squaring (`--l2-squared false`); overrides the config.
    #[arg(long)]
    l2_squared: Option<bool>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Featurize(a) => commands::featurize(a),
        Command::Distance(a) => commands::distance(a),
        Command::Rank(a) => commands::rank(a),
        Command::Correlate(a) => commands::correlate(a),
        Command::GenNoise(a) => commands::gen_noise(a),
        Command::SsdlDemo(a) => commands::ssdl_demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
