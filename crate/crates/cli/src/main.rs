use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use vcgraph::io::{EdgeListSpec, KroneckerParams};
use vcgraph::pipeline::{self, AlgoSpec, Assignment, PartitionOptions, RunOptions};
use vcgraph::runtime::{Execution, JobConfig, TransportKind};
use vcgraph::{Error, Method};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

/// Vertex-cut graph partitioning and subgraph-centric graph processing.
#[derive(Parser)]
#[command(name = "vcgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a Kronecker (R-MAT) edge list.
    Gen(GenArgs),
    /// Split an edge list into partition files plus metrics.json.
    Partition(PartitionArgs),
    /// Print the balance and replication of a partition directory.
    Metrics(MetricsArgs),
    /// Run an algorithm over a partition directory.
    Run(RunArgs),
}

#[derive(Args)]
struct GenArgs {
    /// log2 of the vertex id range.
    #[arg(long)]
    scale: u32,
    /// Edges per vertex.
    #[arg(long, default_value_t = 16)]
    edgefactor: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.57)]
    a: f64,
    #[arg(long, default_value_t = 0.19)]
    b: f64,
    #[arg(long, default_value_t = 0.19)]
    c: f64,
    #[arg(long, default_value_t = 0.05)]
    d: f64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PartitionArgs {
    /// Edge list: `src dst [weight]` per line.
    #[arg(short, long)]
    input: PathBuf,
    /// Label file: `id label` per line.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(short = 'n', long = "partitions")]
    partitions: usize,
    #[arg(long, value_parser = parse_method, conflicts_with = "plan")]
    method: Option<Method>,
    /// Explicit assignment: `src dst partition` lines, plus optional
    /// `master vertex partition` lines.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Seed for master election and isolated-vertex placement.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add every edge in both directions.
    #[arg(long)]
    undirected: bool,
    /// Read a third column as edge weight.
    #[arg(long)]
    weighted: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(short, long)]
    dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Cc,
    Sssp,
    Pr,
    Gsim,
}

#[derive(Clone, Copy, ValueEnum)]
enum Transport {
    Inproc,
    Tcp,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(short, long)]
    dir: PathBuf,
    /// Source vertex (sssp).
    #[arg(long)]
    source: Option<u64>,
    /// Damping factor (pr).
    #[arg(long, default_value_t = 0.85)]
    alpha: f64,
    /// Activity threshold (pr); defaults to 1e-9 / |V|.
    #[arg(long)]
    eps: Option<f64>,
    /// Pattern file (gsim): `v id label` and `e src dst` lines.
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Worker threads; defaults to the partition count.
    #[arg(long)]
    workers: Option<usize>,
    /// Run every partition on the calling thread.
    #[arg(long, conflicts_with = "workers")]
    sequential: bool,
    #[arg(long, value_enum, default_value_t = Transport::Inproc)]
    transport: Transport,
    /// Superstep cap; defaults to 10 * partitions + 1000.
    #[arg(long)]
    max_supersteps: Option<u64>,
    /// Verify replica agreement after every phase.
    #[arg(long)]
    check_coherence: bool,
    /// Per-superstep, per-worker statistics CSV.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

fn gen(a: GenArgs) -> Result<u8, Failure> {
    let params = KroneckerParams {
        scale: a.scale,
        edge_factor: a.edgefactor,
        a: a.a,
        b: a.b,
        c: a.c,
        d: a.d,
        seed: a.seed,
    };
    let n = pipeline::generate_file(&params, &a.output)?;
    info!("wrote {n} edges to {}", a.output.display());
    Ok(0)
}

fn partition(a: PartitionArgs) -> Result<u8, Failure> {
    if a.partitions == 0 {
        return Err(Failure::Usage("--partitions must be at least 1".into()));
    }
    let assignment = match a.plan {
        Some(p) => Assignment::Explicit(p),
        None => Assignment::Hash(a.method.unwrap_or(Method::CanonicalDegreeHash)),
    };
    let m = pipeline::partition_files(&PartitionOptions {
        input: a.input,
        labels: a.labels,
        spec: EdgeListSpec {
            directed: !a.undirected,
            weighted: a.weighted,
        },
        num_partitions: a.partitions,
        assignment,
        seed: a.seed,
        out_dir: a.output,
    })?;
    println!("imbalance {:?}", m.metrics.imbalance);
    println!("replicationFactor {:?}", m.metrics.replication_factor);
    Ok(0)
}

fn metrics(a: MetricsArgs) -> Result<u8, Failure> {
    let m = pipeline::dir_metrics(&a.dir)?;
    println!("imbalance {:?}", m.imbalance);
    println!("replicationFactor {:?}", m.replication_factor);
    Ok(0)
}

fn run(a: RunArgs) -> Result<u8, Failure> {
    let algo = match a.algo {
        Algo::Cc => AlgoSpec::Cc,
        Algo::Sssp => AlgoSpec::Sssp {
            source: a
                .source
                .ok_or_else(|| Failure::Usage("--algo sssp requires --source".into()))?,
        },
        Algo::Pr => AlgoSpec::Pr {
            alpha: a.alpha,
            epsilon: a.eps,
        },
        Algo::Gsim => {
            let path = a
                .pattern
                .ok_or_else(|| Failure::Usage("--algo gsim requires --pattern".into()))?;
            AlgoSpec::Gsim {
                pattern: vcgraph::algo::Pattern::load(&path).map_err(Error::from)?,
            }
        }
    };
    let execution = if a.sequential {
        Execution::Sequential
    } else {
        match a.workers {
            Some(0) => return Err(Failure::Usage("--workers must be at least 1".into())),
            Some(threads) => Execution::Parallel { threads },
            // One thread per partition; the runtime clamps to the count.
            None => Execution::Parallel {
                threads: usize::MAX,
            },
        }
    };
    let job = JobConfig {
        max_supersteps: a.max_supersteps,
        execution,
        transport: match a.transport {
            Transport::Inproc => TransportKind::InProcess,
            Transport::Tcp => TransportKind::Tcp,
        },
        check_coherence: a.check_coherence || cfg!(debug_assertions),
    };
    let summary = pipeline::run_files(&RunOptions {
        dir: a.dir,
        algo,
        job,
        output: a.output,
        stats: a.stats,
    })?;
    info!(
        "{} supersteps, {} vertices, {} pairs sent",
        summary.supersteps, summary.vertices, summary.pairs_sent
    );
    if summary.converged {
        Ok(0)
    } else {
        eprintln!(
            "vcgraph: stopped after {} supersteps without converging",
            summary.supersteps
        );
        Ok(EXIT_NOT_CONVERGED)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Partition(a) => partition(a),
        Command::Metrics(a) => metrics(a),
        Command::Run(a) => run(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("vcgraph: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(e)) => {
            eprintln!("vcgraph: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
