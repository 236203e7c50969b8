use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Entanglement witnesses for graph states.
///
/// Qubits are numbered from 1 on the command line and from 0 in JSON files.
#[derive(Debug, Parser)]
#[command(name = "graphwit", version, about, long_about = None)]
pub struct Cli {
    /// Worker threads for bipartition sweeps [default: available parallelism].
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
    /// Seed for sampled sweeps and randomized suites.
    #[arg(long, global = true, default_value_t = 20240611)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The 19 LU classes of connected graph states on up to six qubits.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Prints the JSON of a named graph, e.g. `linear:4`, `torus:4x4`, `catalog:14`.
    Graph { family: String },
    /// Writes a white-noise graph-diagonal state `(1 − p)|G⟩⟨G| + p·1/2^n`.
    State {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Builds or optimizes a witness.
    Witness {
        #[command(subcommand)]
        action: WitnessAction,
    },
    /// Checks a witness file in the fully PPT or fully decomposable class.
    /// Exit code 0 iff every bipartition passes.
    Verify(VerifyArgs),
    /// White-noise tolerance of a witness file, or the closed form for a set of size `b` on `n` qubits.
    Tolerance {
        #[arg(long, conflicts_with_all = ["n", "b"], required_unless_present_all = ["n", "b"])]
        witness: Option<PathBuf>,
        #[arg(long, requires = "b")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        b: Option<usize>,
    },
    /// Entanglement monotone N of a graph-diagonal state.
    Monotone {
        #[command(flatten)]
        state: StateSource,
    },
    /// Runs the acceptance suite and prints one line per criterion.
    Selftest {
        /// Criteria to run [default: all].
        #[arg(long = "criterion", short = 'c', value_parser = clap::value_parser!(u8).range(1..=8))]
        criteria: Vec<u8>,
        /// Bipartitions drawn by the sampled 16-qubit sweep.
        #[arg(long, default_value_t = 1000)]
        sample: usize,
        /// Skip the full 32767-bipartition sweeps.
        #[arg(long)]
        quick: bool,
        /// Print every check, not only failures.
        #[arg(long, short)]
        verbose: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        #[arg(long)]
        id: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// `½·1 − |G⟩⟨G|`.
    Projector,
    /// Fully decomposable set witness; one `--bset`.
    Lemma3,
    /// Minimum of lemma3 witnesses; several `--bset`.
    Lemma4,
    /// Fully PPT set witness; one `--bset`.
    Lemma5,
    /// Minimum of lemma5 witnesses; several `--bset`.
    Lemma6,
    /// Periodic square grids.
    Torus,
    /// Two-setting witness of a linear cluster.
    TwoSetting,
    /// Two-setting witness improved by two sets at odd positions.
    TwoSettingImproved,
    /// Reference witness of a catalog class; the graph must be `catalog:K`.
    Catalog,
}

#[derive(Debug, Subcommand)]
pub enum WitnessAction {
    /// Analytic constructions.
    Construct {
        /// Graph JSON file or family spec such as `linear:7`.
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Comma-separated 1-based qubits; repeat for combinations.
        #[arg(long = "bset")]
        bsets: Vec<String>,
        /// Every 1-based valid subset (size ≥ 2) of this pool becomes a set.
        #[arg(long, value_delimiter = ',')]
        subsets_of: Vec<usize>,
        /// Emit an unverified record when a combination precondition fails.
        #[arg(long)]
        force: bool,
        /// Include stabilizer coefficients in the output.
        #[arg(long)]
        stab: bool,
        /// Check the claimed class and record the result; exit code 1 if it fails.
        #[arg(long)]
        verify: bool,
    },
    /// Optimal witness of a class for a state, by linear programming.
    Optimize {
        #[command(flatten)]
        state: StateSource,
        #[arg(long, value_enum, default_value_t = ModeArg::Decomposable)]
        mode: ModeArg,
        /// Skip the white-noise threshold of the class.
        #[arg(long)]
        no_threshold: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ppt,
    Decomposable,
}

#[derive(Debug, Args)]
#[group(skip)]
pub struct StateSource {
    /// State JSON file.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    pub state: Option<PathBuf>,
    /// Graph JSON file or family spec; the state is white noise on it.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long, requires = "graph", default_value_t = 0.0)]
    pub noise: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertSource {
    /// Set certificates when the witness records its sets, else LP.
    Auto,
    Analytic,
    Lp,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub witness: PathBuf,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Dense eigenvalue check instead of the diagonal one (n ≤ 8).
    #[arg(long)]
    pub dense: bool,
    /// Check this many seeded random bipartitions instead of all (ppt mode).
    #[arg(long, conflicts_with = "dense")]
    pub sample: Option<usize>,
    /// Where `P_M` certificates come from in decomposable mode.
    #[arg(long, value_enum, default_value_t = CertSource::Auto)]
    pub certificates: CertSource,
    #[arg(long)]
    pub json: bool,
}
