use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "vonlab", version, about = "Finite-dimensional von Neumann algebra workbench")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalOpts {
    /// Absolute subspace tolerance (default 1e-8).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Relative rank tolerance (default 1e-9).
    #[arg(long = "rank-tol", global = true)]
    pub rank_tol: Option<f64>,
    /// Include matrices (bases, witnesses, unitaries) in the report.
    #[arg(long, global = true)]
    pub witness: bool,
    /// Seed echoed into the report for seeded harnesses.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker thread count; must be at least 1. Work currently runs on one thread.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operator algebras given by generators.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Finite groups and their group von Neumann algebras.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Group actions on finite measured spaces.
    #[command(subcommand)]
    Action(ActionCmd),
    /// Equivalence relations and Feldman-Moore algebras.
    #[command(subcommand)]
    Relation(RelationCmd),
    /// Tensor products and truncated ITPFI towers.
    #[command(subcommand)]
    Tensor(TensorCmd),
    /// Unitary representations.
    #[command(subcommand)]
    Rep(RepCmd),
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    Generate { input: PathBuf },
    Commutant { input: PathBuf },
    Center { input: PathBuf },
    /// Block decomposition; compares `p` and `q` when the document has them.
    Decompose { input: PathBuf },
}

#[derive(Debug, Args)]
pub struct GroupInput {
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    pub input: Option<PathBuf>,
    /// e.g. `symmetric(3)`, `dihedral(4)`, `quaternion(8)`, `cyclic(5)`.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    Lvna(GroupInput),
    Profile(GroupInput),
}

#[derive(Debug, Subcommand)]
pub enum ActionCmd {
    Analyze { input: PathBuf },
    Crossed { input: PathBuf },
    #[command(name = "crossed-ns")]
    CrossedNs { input: PathBuf },
    Bridge { input: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum RelationCmd {
    Measures { input: PathBuf },
    Mvna { input: PathBuf },
    Cartan { input: PathBuf },
    #[command(name = "right-commutant")]
    RightCommutant { input: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TensorCmd {
    /// Tensor product of two algebra documents.
    Kron { first: PathBuf, second: PathBuf },
    /// Truncate the tower of an eigenvalue-list document at `k` slots.
    Itpfi {
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Eigenvalue list of the Powers factor.
    Powers {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        k: usize,
    },
    /// Odometer relation against the tower with rows `(α_i, 1 − α_i)`.
    Odometer {
        #[arg(long)]
        k: usize,
        /// One value for every slot, or `k` comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RepCmd {
    Intertwine { pi: PathBuf, sigma: PathBuf },
    Diagnose { input: PathBuf },
    Decompose { input: PathBuf },
}

impl Command {
    /// `(verb, subverb, input paths)`.
    pub fn describe(&self) -> (&'static str, &'static str, Vec<String>) {
        let p = |x: &PathBuf| vec![x.display().to_string()];
        let g = |x: &GroupInput| match (&x.input, &x.builtin) {
            (Some(path), _) => p(path),
            (None, Some(b)) => vec![b.clone()],
            (None, None) => Vec::new(),
        };
        match self {
            Command::Algebra(c) => match c {
                AlgebraCmd::Generate { input } => ("algebra", "generate", p(input)),
                AlgebraCmd::Commutant { input } => ("algebra", "commutant", p(input)),
                AlgebraCmd::Center { input } => ("algebra", "center", p(input)),
                AlgebraCmd::Decompose { input } => ("algebra", "decompose", p(input)),
            },
            Command::Group(c) => match c {
                GroupCmd::Lvna(x) => ("group", "lvna", g(x)),
                GroupCmd::Profile(x) => ("group", "profile", g(x)),
            },
            Command::Action(c) => match c {
                ActionCmd::Analyze { input } => ("action", "analyze", p(input)),
                ActionCmd::Crossed { input } => ("action", "crossed", p(input)),
                ActionCmd::CrossedNs { input } => ("action", "crossed-ns", p(input)),
                ActionCmd::Bridge { input } => ("action", "bridge", p(input)),
            },
            Command::Relation(c) => match c {
                RelationCmd::Measures { input } => ("relation", "measures", p(input)),
                RelationCmd::Mvna { input } => ("relation", "mvna", p(input)),
                RelationCmd::Cartan { input } => ("relation", "cartan", p(input)),
                RelationCmd::RightCommutant { input } => ("relation", "right-commutant", p(input)),
            },
            Command::Tensor(c) => match c {
                TensorCmd::Kron { first, second } => {
                    ("tensor", "kron", vec![first.display().to_string(), second.display().to_string()])
                }
                TensorCmd::Itpfi { input, .. } => ("tensor", "itpfi", p(input)),
                TensorCmd::Powers { .. } => ("tensor", "powers", Vec::new()),
                TensorCmd::Odometer { .. } => ("tensor", "odometer", Vec::new()),
            },
            Command::Rep(c) => match c {
                RepCmd::Intertwine { pi, sigma } => {
                    ("rep", "intertwine", vec![pi.display().to_string(), sigma.display().to_string()])
                }
                RepCmd::Diagnose { input } => ("rep", "diagnose", p(input)),
                RepCmd::Decompose { input } => ("rep", "decompose", p(input)),
            },
        }
    }
}
