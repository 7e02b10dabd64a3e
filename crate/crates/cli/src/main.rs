mod commands;
mod output;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::Format;

/// Probabilistic zero forcing on graphs.
#[derive(Parser, Debug)]
#[command(name = "pzf", version, about)]
pub struct Cli {
    /// Output format; defaults to json, or to a plain edge list for `gen`.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Monte Carlo worker threads. Results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expected propagation time, from --start or minimized over single vertices.
    Ept {
        #[command(flatten)]
        graph: GraphOpt,
        #[command(flatten)]
        engine: EngineOpt,
        /// Comma-separated start vertices, e.g. "0,3".
        #[arg(long)]
        start: Option<String>,
    },
    /// Probability that every vertex is blue after --ell rounds.
    Lround {
        #[command(flatten)]
        graph: GraphOpt,
        #[command(flatten)]
        engine: EngineOpt,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        ell: usize,
    },
    /// Least round count reached with probability at least --alpha.
    Confidence {
        #[command(flatten)]
        graph: GraphOpt,
        #[command(flatten)]
        engine: EngineOpt,
        #[arg(long)]
        start: Option<String>,
        /// Confidence level in (0, 1), as a decimal or "p/q".
        #[arg(long)]
        alpha: String,
    },
    /// Throttling number: minimum of |Z| + ept(G, Z).
    Throttle {
        #[command(flatten)]
        graph: GraphOpt,
        #[command(flatten)]
        engine: EngineOpt,
        #[command(flatten)]
        search: SearchOpt,
    },
    /// Confidence throttling number: minimum of |Z| plus the alpha-confidence time.
    ThrottleAlpha {
        #[command(flatten)]
        graph: GraphOpt,
        #[command(flatten)]
        engine: EngineOpt,
        #[command(flatten)]
        search: SearchOpt,
        #[arg(long)]
        alpha: String,
    },
    /// Probability that the blue set is zero forcing at the first round where that is possible.
    Kangyi {
        #[command(flatten)]
        graph: GraphOpt,
        #[command(flatten)]
        engine: EngineOpt,
        /// Comma-separated start set; may be empty.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
    },
    /// Search for edge additions that raise the expected propagation time.
    ScanMonotone {
        #[command(flatten)]
        scan: ScanOpt,
    },
    /// Search for nested start sets with decreasing forcing probability.
    ScanKangyi {
        #[command(flatten)]
        scan: ScanOpt,
    },
    /// Ratios of expected propagation time to radius.
    ProbeRadius {
        /// Graph spec or edge-list file; repeatable.
        #[arg(long, required = true)]
        graph: Vec<String>,
        #[arg(long)]
        sweep: Option<String>,
        #[command(flatten)]
        engine: EngineOpt,
    },
    /// Deterministic propagation time under zero forcing or PSD forcing.
    Pt {
        #[command(flatten)]
        graph: GraphOpt,
        #[arg(long)]
        start: String,
        #[arg(long, value_enum, default_value_t = RuleArg::Zf)]
        rule: RuleArg,
    },
    /// Zero forcing number with a minimum witness.
    Zfnumber {
        #[command(flatten)]
        graph: GraphOpt,
        #[arg(long, default_value_t = pzf_core::derived::DEFAULT_SEARCH_CAP)]
        search_cap: usize,
    },
    /// Emit a graph as an edge list.
    Gen {
        #[command(flatten)]
        graph: GraphOpt,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GraphOpt {
    /// Generator string (e.g. "cycle:8", "gnp:n=20,p=0.3,seed=4") or edge-list file.
    #[arg(long)]
    pub graph: String,
    /// Sweep one generator parameter, e.g. "n=4..12"; one output row per value.
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct EngineOpt {
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cap on reachable states of the exact chain.
    #[arg(long)]
    pub max_states: Option<usize>,
    /// Cap on white vertices with fractional force probability in one state.
    #[arg(long)]
    pub max_frontier: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SearchOpt {
    #[arg(long, value_enum, default_value_t = SearchKind::Exhaustive)]
    pub search: SearchKind,
    /// Largest vertex count for exhaustive subset search.
    #[arg(long, default_value_t = pzf_core::derived::DEFAULT_SEARCH_CAP)]
    pub search_cap: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ScanOpt {
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value_t = SamplerKind::Exhaustive)]
    pub sampler: SamplerKind,
    /// Edge probability for the gnp sampler.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Draws per order for the gnp sampler.
    #[arg(long, default_value_t = 10)]
    pub samples: u64,
    /// First gnp seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_states: Option<usize>,
    #[arg(long)]
    pub max_frontier: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    Exhaustive,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerKind {
    Exhaustive,
    Gnp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Zf,
    Psd,
}

/// Failure classes, each with a stable exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(pzf_core::Error),
}

impl From<pzf_core::Error> for CliError {
    fn from(e: pzf_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_resource() => 3,
            CliError::Core(pzf_core::Error::Internal(_)) => 4,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(AssertUnwindSafe(|| commands::run(&cli))) {
        Ok(Ok(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(4)
        }
    }
}
