//! Command-line front end for positional and role analysis of
//! multirelational graphs.
//!
//! The binary wraps the `relsg-core` library: it loads graphs from a JSON
//! manifest plus CSV relation matrices, runs one analysis per invocation,
//! writes machine-readable artifacts into an output directory, and prints a
//! short human-readable summary to stdout. Logs (file paths written,
//! progress notes) go to stderr so stdout stays pipeable.
//!
//! Exit codes: `0` on success, `1` on validation errors (bad flags, missing
//! files, malformed input), `2` when a *verification* claim fails — an
//! imperfect partition passed to `verify-hom`, a non-nesting hierarchy, or a
//! homomorphism property violation.

pub mod commands;
pub mod fixtures;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relsg_core::{Metric, DEFAULT_CAP};

/// Positional and role analysis for multirelational graphs.
#[derive(Debug, Parser)]
#[command(
    name = "relsg",
    version,
    about = "Positional and role analysis for multirelational graphs",
    arg_required_else_help = true
)]
pub struct Cli {
    /// Graph manifest (JSON listing node labels and relation CSV files).
    #[arg(long, global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,

    /// Directory artifacts are written to (created if missing).
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,

    /// Worker threads for parallel sections (default: all cores).
    /// Results are identical for every thread count.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Reserved for future randomized features. Accepted and ignored:
    /// every pipeline currently shipped is deterministic.
    #[arg(long, global = true, value_name = "SEED")]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a graph manifest and summarize its shape.
    Ingest,
    /// Partition nodes by structural equivalence, exact or clustered.
    Partition(PartitionArgs),
    /// Density blockmodel of the graph under a partition.
    Density(DensityArgs),
    /// Boolean image blockmodel: block densities thresholded at delta.
    Image(ImageArgs),
    /// Lean-fit image: a tie wherever a block density is positive.
    Leanfit(DensityArgs),
    /// Generate the Boolean semigroup of relations and its multiplication
    /// table.
    Semigroup(SemigroupArgs),
    /// Generate the k-truncated max-times semigroup of a weighted graph.
    Truncate(TruncateArgs),
    /// Check that a partition is perfect and induces a semigroup
    /// homomorphism onto the quotient graph's semigroup.
    VerifyHom(VerifyHomArgs),
    /// Check functoriality of induced homomorphisms across a nested
    /// hierarchy of partitions.
    VerifyFunctor(VerifyFunctorArgs),
    /// One-shot pipeline: summary, partition, semigroup, densities, images.
    Report(ReportArgs),
    /// List bundled example datasets, or materialize one into --out.
    Fixtures(FixturesArgs),
}

/// Distance metric used when clustering profile vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    /// Euclidean distance between profile vectors.
    Euclidean,
    /// Cosine distance (1 - cosine similarity) between profile vectors.
    Cosine,
}

impl MetricArg {
    pub fn to_metric(self) -> Metric {
        match self {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Cosine => Metric::CosineDistance,
        }
    }
}

/// Multiplication-table artifact format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    /// Aligned plain-text table (table.txt).
    Txt,
    /// JSON rendering with word labels (table.json).
    Json,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// Group nodes that are exactly structurally equivalent.
    #[arg(long)]
    pub exact: bool,

    /// Restrict --exact to a comma-separated subset of relations.
    #[arg(long, value_delimiter = ',', value_name = "NAMES", requires = "exact")]
    pub relations: Option<Vec<String>>,

    /// Distance metric for clustering.
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    pub metric: MetricArg,

    /// Cluster to exactly this many blocks (complete linkage).
    #[arg(long, value_name = "K", conflicts_with = "threshold")]
    pub blocks: Option<usize>,

    /// Merge clusters while the complete linkage stays at or below this
    /// distance (decimal or p/q).
    #[arg(long, value_name = "T")]
    pub threshold: Option<String>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Partition file: JSON object mapping node labels to block labels.
    #[arg(long, value_name = "FILE")]
    pub partition: PathBuf,
}

#[derive(Debug, Args)]
pub struct ImageArgs {
    /// Partition file: JSON object mapping node labels to block labels.
    #[arg(long, value_name = "FILE")]
    pub partition: PathBuf,

    /// Threshold in (0,1]: "auto" picks each relation's overall tie density
    /// (ones / n^2); otherwise a fixed decimal or p/q value.
    #[arg(long, value_name = "auto|VALUE", default_value = "auto")]
    pub delta: String,
}

#[derive(Debug, Args)]
pub struct SemigroupArgs {
    /// Abort if the closure exceeds this many elements.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CAP)]
    pub cap: usize,

    /// Multiplication-table artifact format.
    #[arg(long, value_enum, default_value_t = TableFormat::Txt)]
    pub table: TableFormat,
}

#[derive(Debug, Args)]
pub struct TruncateArgs {
    /// Truncation depth: products of more than K generators are discarded.
    #[arg(long, value_name = "K")]
    pub k: usize,

    /// Rounding policy: "none" for exact arithmetic, or a digit count
    /// (0..=12) to round every product entry as it is formed.
    #[arg(long, value_name = "none|DIGITS", default_value = "2")]
    pub round: String,

    /// Abort if the closure exceeds this many elements.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyHomArgs {
    /// Partition file: JSON object mapping node labels to block labels.
    #[arg(long, value_name = "FILE")]
    pub partition: PathBuf,

    /// Abort if a semigroup closure exceeds this many elements.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyFunctorArgs {
    /// Partition files, fine to coarse; each must refine the next.
    #[arg(long, value_name = "FILES", num_args = 1.., required = true)]
    pub hierarchy: Vec<PathBuf>,

    /// Abort if a semigroup closure exceeds this many elements.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Partition file; defaults to the exact structural partition.
    #[arg(long, value_name = "FILE")]
    pub partition: Option<PathBuf>,

    /// Cluster to K blocks instead of reading --partition.
    #[arg(long, value_name = "K", conflicts_with = "partition")]
    pub blocks: Option<usize>,

    /// Distance metric when clustering with --blocks.
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    pub metric: MetricArg,

    /// Image threshold: "auto" or a fixed value in (0,1].
    #[arg(long, value_name = "auto|VALUE", default_value = "auto")]
    pub delta: String,

    /// Abort if the semigroup closure exceeds this many elements.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    /// Fixture name; omit to list what is bundled.
    pub name: Option<String>,
}

/// Anything the CLI can fail with, each mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Analysis or input error from the core library.
    Core(relsg_core::Error),
    /// Bad flag combination or unusable argument value.
    Usage(String),
    /// Filesystem failure while writing an artifact.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A verification claim failed outside the core error channel.
    Verification(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io { path, source } => {
                write!(f, "i/o error on {}: {source}", path.display())
            }
            CliError::Verification(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<relsg_core::Error> for CliError {
    fn from(e: relsg_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// Process exit code: 2 for failed verification claims, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_verification_failure() => 2,
            CliError::Verification(_) => 2,
            _ => 1,
        }
    }
}

/// Runs one parsed invocation. Artifacts land under `cli.out`.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest => commands::ingest(cli),
        Command::Partition(args) => commands::partition(cli, args),
        Command::Density(args) => commands::density(cli, args),
        Command::Image(args) => commands::image(cli, args),
        Command::Leanfit(args) => commands::leanfit(cli, args),
        Command::Semigroup(args) => commands::semigroup(cli, args),
        Command::Truncate(args) => commands::truncate(cli, args),
        Command::VerifyHom(args) => commands::verify_hom(cli, args),
        Command::VerifyFunctor(args) => commands::verify_functor(cli, args),
        Command::Report(args) => commands::report(cli, args),
        Command::Fixtures(args) => commands::fixtures_cmd(cli, args),
    }
}

/// Full process entry: parse, configure the thread pool, dispatch, map the
/// outcome to an exit code. Kept in the library so tests can drive it.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // The global pool can only be sized once per process; later calls
        // (e.g. in-process test harnesses) keep the first configuration.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
