mod commands;
mod report;
mod run;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use run::Algo;

/// Sorting and selection in partially ordered sets through a comparison oracle.
#[derive(Debug, Parser)]
#[command(name = "posetkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random poset file.
    Gen(GenArgs),
    /// Sort a poset file and report the query count.
    Sort(SortArgs),
    /// Select the elements of height below k.
    Select(SelectArgs),
    /// Find the minimal elements.
    Minimals(MinimalsArgs),
    /// Print a linear extension, one id per line.
    Linext(LinextArgs),
    /// Print the height of every element.
    Heights(HeightsArgs),
    /// Run a selection algorithm against an adaptive adversary.
    Adversary(AdversaryArgs),
    /// Run algorithms on generated instances and write a CSV report.
    Bench(BenchArgs),
    /// Run algorithms on a poset file and compare with brute force.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// Disjoint random chains.
    Chains,
    /// Random chains plus random cross-chain relations.
    Bounded,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    w: usize,
    #[arg(long, value_enum, default_value = "chains")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SortAlgo {
    Bininsert,
    Entropy,
    Mergesort,
    UnknownWidth,
    /// Input is an arbitrary transitive relation.
    Transitive,
}

#[derive(Debug, Args)]
struct SortArgs {
    #[arg(long, value_enum, default_value = "mergesort")]
    algo: SortAlgo,
    #[arg(long)]
    input: PathBuf,
    /// Width bound; the true width of the input when omitted.
    #[arg(long)]
    width: Option<usize>,
    /// CSV report path, `-` for standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the chain-merge index to this file.
    #[arg(long)]
    emit_index: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Det,
    Rand,
}

#[derive(Debug, Args)]
struct SelectArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "det")]
    algo: Variant,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Runs with seeds `seed, seed+1, …`; the mean is reported.
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MinimalsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "det")]
    algo: Variant,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct LinextArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct HeightsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    width: Option<usize>,
    /// A linear extension, one id per line; computed when omitted.
    #[arg(long)]
    extension: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdversaryMode {
    Min,
    Ksel,
}

#[derive(Debug, Args)]
struct AdversaryArgs {
    #[arg(long, value_enum)]
    mode: AdversaryMode,
    #[arg(long, value_enum, default_value = "det")]
    algo: Variant,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    w: usize,
    /// Levels to select in `ksel` mode.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the witness poset here instead of standard output.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Algorithms to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "mergesort")]
    algo: Vec<Algo>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    w: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "chains")]
    model: Model,
    /// Trial `t` uses seed `seed + t`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// CSV output, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    width: Option<usize>,
    /// Also run the randomized, entropy and linear-extension algorithms.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    k: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
