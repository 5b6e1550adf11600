use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prism_cactus::chains::ParityRequest;
use prism_cactus::Vertex;
use prism_cactus_cli::{
    cmd_bench, cmd_cactus, cmd_chains, cmd_check, cmd_corpus, cmd_decompose, cmd_oracle, cmd_prism_ham, cmd_render, cmd_verify,
    ChainOp, Format, Options, RunReport,
};

#[derive(Parser)]
#[command(name = "prismcactus", version, about = "Spanning bipartite cactuses and prism Hamilton cycles of plane graphs")]
struct Cli {
    /// Outer face as a comma-separated boundary walk
    #[arg(long, global = true, value_delimiter = ',')]
    outer: Option<Vec<Vertex>>,
    /// Anchor pair x,y
    #[arg(long, global = true, value_parser = vertex_pair)]
    anchors: Option<(Vertex, Vertex)>,
    /// Spine parity request: odd, even or any
    #[arg(long, global = true, default_value = "any")]
    parity: ParityRequest,
    /// Size bound for generators and exhaustive searches
    #[arg(long, global = true, env = "PRISMCACTUS_MAX_N")]
    max_n: Option<usize>,
    /// Seed for all randomised generation
    #[arg(long, global = true, env = "PRISMCACTUS_SEED", default_value_t = 0x5eed)]
    seed: u64,
    /// Record one line per recursion step
    #[arg(long, global = true)]
    trace: bool,
    /// Input or output graph format: pgr or planar_code
    #[arg(long, global = true, default_value = "pgr")]
    format: Format,
    /// Directory for artifacts and the run report
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Euler consistency, connectivity, circuit verdict, degrees, bipartiteness
    Check { input: PathBuf },
    /// Dump the chain of blocks of B - x (x = first anchor)
    Decompose { input: PathBuf },
    /// Run one chain construction and validate it
    Chains {
        input: PathBuf,
        /// rihta, xyxy, bip, cycle-bip, parity-bxbip, nonbip or cycle-nonbip
        #[arg(long)]
        op: ChainOp,
        /// Marked vertices, comma-separated
        #[arg(long, value_delimiter = ',')]
        marks: Vec<Vertex>,
    },
    /// Spanning bipartite cactus with both anchors good
    Cactus { input: PathBuf },
    /// Cactus, prism Hamilton cycle and verification
    PrismHam { input: PathBuf },
    /// Check a prism cycle and/or cactus file against a graph
    Verify {
        input: PathBuf,
        #[arg(long)]
        prism: Option<PathBuf>,
        #[arg(long)]
        cactus: Option<PathBuf>,
    },
    /// Exhaustive prism Hamilton search with verticals at the anchors
    Oracle { input: PathBuf },
    /// Generate the test corpus (optionally adding a planar_code file)
    Corpus {
        #[arg(long)]
        ingest: Option<PathBuf>,
    },
    /// DOT output for a graph, cactus or prism-cycle file
    Render {
        artifact: PathBuf,
        /// graph, cactus or prism
        #[arg(long)]
        kind: String,
        /// Host graph (for prism cycles)
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Time the pipeline over the corpus, parallel against sequential
    Bench,
}

fn vertex_list(s: &str) -> Result<Vec<Vertex>, String> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse().map_err(|_| format!("bad vertex `{t}`"))).collect()
}

fn vertex_pair(s: &str) -> Result<(Vertex, Vertex), String> {
    match vertex_list(s)?.as_slice() {
        &[x, y] => Ok((x, y)),
        _ => Err("expected two vertices x,y".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = Options {
        format: cli.format,
        outer: cli.outer,
        anchors: cli.anchors,
        parity: cli.parity,
        max_n: cli.max_n,
        seed: cli.seed,
        trace: cli.trace,
        out: cli.out,
    };
    let report: RunReport = match &cli.command {
        Command::Check { input } => cmd_check(input, &o),
        Command::Decompose { input } => cmd_decompose(input, &o),
        Command::Chains { input, op, marks } => cmd_chains(input, *op, marks, &o),
        Command::Cactus { input } => cmd_cactus(input, &o),
        Command::PrismHam { input } => cmd_prism_ham(input, &o),
        Command::Verify { input, prism, cactus } => cmd_verify(input, prism.as_deref(), cactus.as_deref(), &o),
        Command::Oracle { input } => cmd_oracle(input, &o),
        Command::Corpus { ingest } => cmd_corpus(ingest.as_deref(), &o),
        Command::Render { artifact, kind, graph } => cmd_render(artifact, kind, graph.as_deref(), &o),
        Command::Bench => cmd_bench(&o),
    };
    print!("{}", report.to_text());
    if o.out.is_none() {
        for (name, content) in &report.artifacts {
            println!("--- {name}");
            print!("{content}");
        }
    }
    for line in &report.trace {
        eprintln!("trace {line}");
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(report.exit_code() as u8)
}
