mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "emcover",
    version,
    about = "Covering hypergraphs and S_k digraphs"
)]
pub struct Cli {
    /// Output format. Hypergraphs and digraphs default to JSON; reports
    /// default to plain text.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Results cache (line-delimited JSON). Caching is off unless set.
    #[arg(long, env = "EMCOVER_CACHE", global = true)]
    pub cache: Option<PathBuf>,

    /// Write data here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Edgelist,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a hypergraph or digraph.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a property of a hypergraph or digraph read from --input or stdin.
    #[command(subcommand)]
    Verify(Verify),
    /// Evaluate a closed-form bound.
    #[command(subcommand)]
    Bound(Bound),
    /// Exact minimum by exhaustive search.
    #[command(subcommand)]
    Solve(Solve),
    /// All optima up to isomorphism.
    #[command(subcommand)]
    Enumerate(Enumerate),
    /// Print the (r-1)-shadow of a hypergraph.
    Shadow(InputArg),
    /// Inspect or maintain the results cache.
    #[command(subcommand)]
    Cache(CacheCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exact,
    Greedy,
    Modular,
    Supplied,
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Hub of k-r+1 vertices plus an inner covering.
    G {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        /// Residue for the modular strategy (default: the inner vertex count).
        #[arg(long)]
        c: Option<u32>,
        /// Inner covering for the supplied strategy.
        #[arg(long)]
        inner: Option<PathBuf>,
    },
    /// Extremal graph for r = 2.
    Em {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Residue-class covering with patches.
    Modular {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        c: Option<u32>,
    },
    /// Greedy covering.
    Greedy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
    },
    /// Digraph with kn arcs and property S_k.
    DigraphA {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Args, Debug)]
pub struct InputArg {
    /// Read from this file instead of standard input (JSON or edge list).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Every k-set has at least s covering vertices.
    Cover {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Audit every set in parallel instead of stopping at the first failure.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        input: InputArg,
    },
    /// Every k-set is dominated by one vertex.
    Sk {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        input: InputArg,
    },
    /// Every (r-1)-set lies in an edge.
    ShadowComplete {
        #[command(flatten)]
        input: InputArg,
    },
    /// Membership in the hub-plus-minimum-covering family.
    MemberG {
        #[arg(long)]
        k: u32,
        /// Covering number of the inner vertex set, if known.
        #[arg(long)]
        d_inner: Option<u64>,
        #[command(flatten)]
        input: InputArg,
    },
    /// Membership in the kn-arc digraph family.
    MemberA {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum Bound {
    /// Exact value for graphs.
    Em {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Construction size for a given inner covering number.
    G {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        /// Inner covering number; solved (or read from the cache) if absent.
        #[arg(long)]
        d_inner: Option<u64>,
    },
    /// Construction size if a perfect inner covering exists.
    GSteiner {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
    },
    /// ceil(C(n,r-1)/r).
    CoveringLb {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
    },
    /// Shadow lower bound for m edges of size r.
    Kk {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        r: u32,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Lift the default instance-size caps.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Subcommand, Debug)]
pub enum Solve {
    /// Covering number D(n,r).
    D {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Fewest edges covering every k-set (s times).
    F {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Fewest arcs of an S_k digraph on n vertices.
    Digraph {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Fewest vertices of an oriented S_k graph.
    OrientedF {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 7)]
        n_max: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum Enumerate {
    /// Optimal covering hypergraphs up to isomorphism.
    F {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Optimal S_k digraphs up to isomorphism.
    Digraph {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheCmd {
    /// List stored results.
    Show,
    /// Re-check every stored certificate.
    Verify,
    /// Drop results from other solver versions and unreadable lines.
    Gc,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::EXIT_USAGE)
        }
    }
}
