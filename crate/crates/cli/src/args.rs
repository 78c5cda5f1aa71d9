use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphwalk_core::graph::GraphFormat;

#[derive(Debug, Parser)]
#[command(name = "graphwalk", version, about = "Quantum walk search on graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the walk for T steps and measure an edge.
    Search(SearchArgs),
    /// Marked-edge probability for every t up to T_max.
    Sweep(SweepArgs),
    /// Closed-form spectrum and hitting time of the star graph.
    AnalyzeStar(StarArgs),
    /// Node search on the starified complete graph.
    AnalyzeComplete(CompleteArgs),
    /// Compile one walk step into a local gate circuit.
    Compile(CompileArgs),
    /// Check a compiled step against the exact walk.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    EdgeList,
    Json,
}

impl From<InputFormat> for GraphFormat {
    fn from(f: InputFormat) -> Self {
        match f {
            InputFormat::EdgeList => GraphFormat::EdgeList,
            InputFormat::Json => GraphFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file (edge list or JSON).
    #[arg(long)]
    pub graph: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct MarkArgs {
    /// Marked edge given by its endpoint labels.
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    pub mark_edge: Option<Vec<u64>>,
    /// Marked node; the graph is starified and its virtual edge is marked.
    #[arg(long, value_name = "U")]
    pub mark_node: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub mark: MarkArgs,
    /// Walk length; the sweep optimum up to --t-max when omitted.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Sweep horizon used when --steps is omitted.
    #[arg(long)]
    pub t_max: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Repeat each run until the marked edge is measured.
    #[arg(long)]
    pub guaranteed: bool,
    /// Call cap per guaranteed run.
    #[arg(long, default_value_t = graphwalk_core::walk::DEFAULT_CALL_CAP)]
    pub cap: u64,
    /// Worker threads for trials.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub mark: MarkArgs,
    #[arg(long)]
    pub t_max: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub emit: Emit,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct StarArgs {
    /// Number of leaves.
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CompleteArgs {
    #[arg(long)]
    pub n: usize,
    /// Sweep horizon; 2N when omitted.
    #[arg(long)]
    pub t_max: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub mark: MarkArgs,
    /// Shuffle each node's edge enumeration with this seed.
    #[arg(long)]
    pub shuffle_seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub mark: MarkArgs,
    /// Circuit JSON to check instead of compiling one.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}
