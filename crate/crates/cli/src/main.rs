//! `smallcover`: build polytopes, enumerate and classify small covers, and
//! report their homology.

mod artifacts;
mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smallcover::Execution;

#[derive(Parser, Debug)]
#[command(name = "smallcover", version, about = "Small covers over the right-angled 120-cell")]
pub struct Cli {
    /// Worker threads; 1 gives a fully serial run. Defaults to available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Print progress and per-item detail.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct a polytope and print its combinatorial summary.
    Build(BuildArgs),
    /// Enumerate GL-normalized non-singular colorings.
    Enumerate(EnumerateArgs),
    /// Group result vectors into DJ-equivalence classes.
    Classify(ClassifyArgs),
    /// Betti numbers, Euler characteristic and intersection forms.
    Topology(TopologyArgs),
    /// Run the built-in acceptance checks or audit result files.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// `120cell`, `dodecahedron`, `cube:N`, `lobell:N` or an interchange file.
    pub selector: String,
    /// Write the polytope in the interchange format.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Recursion,
    Blockpaste,
    Both,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long, default_value = "120cell")]
    pub polytope: String,
    /// Added colors in decimal, comma-separated (exact k-coloring), `none`
    /// for the basis alone, or `all` for every nonzero color.
    #[arg(long, default_value = "all")]
    pub set: String,
    #[arg(long, value_enum, default_value = "recursion")]
    pub engine: EngineChoice,
    /// Buffer size at which block pasting splits its work.
    #[arg(long, default_value_t = smallcover::search::DEFAULT_SPLIT_THRESHOLD)]
    pub threshold: usize,
    /// Transfer permutation choice: `lexmin`, `lexmax` or `stride:K`.
    #[arg(long, default_value = "lexmin")]
    pub transfer: String,
    #[arg(long, default_value = "results")]
    pub out_dir: PathBuf,
    /// Take fixed colors from this result file (first vector unless `--line`).
    #[arg(long, requires = "fix")]
    pub prefix_from: Option<PathBuf>,
    /// Number of leading facets to keep from the prefix vector.
    #[arg(long, requires = "prefix_from")]
    pub fix: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub line: usize,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Result files; their vectors are concatenated in order.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value = "120cell")]
    pub polytope: String,
    /// Use only orientation-preserving symmetries.
    #[arg(long)]
    pub rotations_only: bool,
    /// Class report destination; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-input class mapping (`input class`, both 1-based).
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TopologyArgs {
    pub input: PathBuf,
    #[arg(long, default_value = "120cell")]
    pub polytope: String,
    /// Report the orientable double cover of each non-orientable input.
    #[arg(long)]
    pub double_cover: bool,
    /// Include mod-2 Betti numbers from the h-vector.
    #[arg(long)]
    pub mod2: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Tier {
    Quick,
    Full,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub tier: Tier,
    /// Audit every result file with a sidecar in this directory instead.
    #[arg(long)]
    pub results: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let exec = if workers <= 1 { Execution::Sequential } else { Execution::Parallel };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = commands::Context {
        exec,
        workers,
        verbose: cli.verbose,
    };
    match pool.install(|| commands::run(&cli.command, &ctx)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
