use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plumbing_core::relative::Hypothesis;
use plumbing_core::ExecMode;

/// Exact invariants of plumbing graphs of normal surface singularities.
///
/// GRAPH is a path to a `plumbing/1` JSON file, `corpus:<name>` for a bundled
/// graph, or `random:<n>` for a seeded random tree on n vertices.
#[derive(Debug, Parser)]
#[command(name = "plumb", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Emit a JSON report (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit `key: value` lines instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Seed for `random:<n>` graphs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest box scanned point by point.
    #[arg(long, global = true, value_name = "POINTS")]
    pub max_box: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Leave elapsed time out of the report.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sequential,
    Parallel,
}

impl From<Mode> for ExecMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sequential => ExecMode::Sequential,
            Mode::Parallel => ExecMode::Parallel,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ChernArgs {
    /// Chern class in integer E*-coordinates, e.g. "v0:2,v3:-1".
    #[arg(long, value_name = "COORDS", allow_hyphen_values = true)]
    pub chern_estar: Option<String>,
    /// Chern class in rational E-coordinates, e.g. "v0:1/2".
    #[arg(long, value_name = "COORDS", allow_hyphen_values = true)]
    pub chern_e: Option<String>,
}

#[derive(Debug, Default, Args)]
pub struct SubArgs {
    /// Vertices of the fixed sub-structure, e.g. "v1,v2"; generic unless
    /// `--oracle` supplies a table.
    #[arg(long, value_name = "IDS")]
    pub subgraph: Option<String>,
    /// Tower file (`tower/1`); the sub-structure is the union of the layers
    /// below `--layer`.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["oracle", "subgraph"])]
    pub tower: Option<PathBuf>,
    /// Layer of the tower to evaluate, 1-based; defaults to the top layer.
    #[arg(long, requires = "tower")]
    pub layer: Option<usize>,
    /// Table oracle file (`h1table/1`) for the sub-structure on `--subgraph`.
    #[arg(long, value_name = "FILE", requires = "subgraph")]
    pub oracle: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum HypothesisArg {
    #[default]
    Positive,
    Nonzero,
}

impl From<HypothesisArg> for Hypothesis {
    fn from(h: HypothesisArg) -> Self {
        match h {
            HypothesisArg::Positive => Hypothesis::Positive,
            HypothesisArg::Nonzero => Hypothesis::Nonzero,
        }
    }
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    pub graph: String,
    /// Effective cycle, e.g. "v0:2,v1:1"; "reduced" for E, "" for 0.
    #[arg(long, allow_hyphen_values = true)]
    pub cycle: String,
    #[command(flatten)]
    pub chern: ChernArgs,
    #[command(flatten)]
    pub sub: SubArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural and negative-definiteness check.
    Validate { graph: String },
    /// Z_K, det, Z_min, classification and generic p_g.
    Invariants { graph: String },
    /// Rational, elliptic or the value of min χ over l > 0.
    Classify { graph: String },
    /// Geometric genus of the generic or relatively generic structure.
    Pg {
        graph: String,
        #[command(flatten)]
        sub: SubArgs,
    },
    /// h¹ of a line bundle on a cycle, with h⁰, dominance and Abel-map dimensions.
    H1 {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Coefficient hypothesis checked on the tower layer.
        #[arg(long, value_enum, default_value_t)]
        hypothesis: HypothesisArg,
    },
    /// h⁰ of a line bundle on a cycle.
    H0 {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Relative dominance test; exits 1 when not dominant.
    Dominant {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Dimensions of the spaces of effective Cartier divisors.
    Eca {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Relative rationality of a cycle Z ≥ E; exits 1 when it fails.
    Rational {
        graph: String,
        #[arg(long, allow_hyphen_values = true)]
        cycle: String,
        #[command(flatten)]
        sub: SubArgs,
    },
    /// Membership in the analytic semigroup; exits 1 for non-members.
    Semigroup {
        graph: String,
        #[command(flatten)]
        chern: ChernArgs,
        #[command(flatten)]
        sub: SubArgs,
    },
    /// h¹ of a natural line bundle on the whole resolution.
    Natural {
        graph: String,
        #[command(flatten)]
        chern: ChernArgs,
        #[command(flatten)]
        sub: SubArgs,
    },
    /// Dominance of (-N E*_v, O) for N = 1..n-max; exits 1 if dominance for
    /// some N does not carry down to N = 1.
    EllipticLemma {
        graph: String,
        #[arg(long)]
        vertex: String,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[command(flatten)]
        sub: SubArgs,
    },
    /// Lists the bundled graphs, or prints one as `plumbing/1` JSON.
    Corpus { name: Option<String> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Invariants { .. } => "invariants",
            Command::Classify { .. } => "classify",
            Command::Pg { .. } => "pg",
            Command::H1 { .. } => "h1",
            Command::H0 { .. } => "h0",
            Command::Dominant { .. } => "dominant",
            Command::Eca { .. } => "eca",
            Command::Rational { .. } => "rational",
            Command::Semigroup { .. } => "semigroup",
            Command::Natural { .. } => "natural",
            Command::EllipticLemma { .. } => "elliptic-lemma",
            Command::Corpus { .. } => "corpus",
        }
    }
}
