//! File-to-file steps: generate an edge list, partition it into a dump
//! directory, and run a program over a dump directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::algo::{ConnectedComponents, GraphSimulation, PageRank, Pattern, ShortestPaths};
use crate::error::{Error, FormatError};
use crate::graph::{InputGraph, PartitionId, VertexId};
use crate::io::{self, EdgeListSpec, KroneckerParams, MetricsFile};
use crate::partition::{compute_metrics, Method, PartitionMetrics, PartitionPlan};
use crate::runtime::{run_job, write_stats_csv, JobConfig, Program, SuperstepStats};

/// Sidecar written next to a generated edge list, picked up by
/// [`partition_files`] for `metrics.json`.
pub fn params_path(edges: &Path) -> PathBuf {
    let mut s = edges.as_os_str().to_owned();
    s.push(".params.json");
    PathBuf::from(s)
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the raw Kronecker edge stream to `out` and its parameters to the
/// sidecar file. Returns the number of edges written.
pub fn generate_file(params: &KroneckerParams, out: &Path) -> Result<usize, Error> {
    let edges = io::kronecker_edges(params)?;
    let n = edges.len();
    io::write_edge_list(
        out,
        edges.into_iter().map(|(s, d)| crate::Edge::new(s, d)),
        false,
    )?;
    let sidecar = params_path(out);
    let json = serde_json::to_string_pretty(params).expect("params serialize") + "\n";
    std::fs::write(&sidecar, json).map_err(io_error(&sidecar))?;
    Ok(n)
}

/// How edges are assigned to partitions.
#[derive(Debug, Clone, PartialEq)]
pub enum Assignment {
    Hash(Method),
    /// A plan file: `<src> <dst> <partition>` per edge, optionally
    /// `master <vertex> <partition>` lines overriding the election.
    Explicit(PathBuf),
}

#[derive(Debug, Clone)]
pub struct PartitionOptions {
    pub input: PathBuf,
    pub labels: Option<PathBuf>,
    pub spec: EdgeListSpec,
    pub num_partitions: usize,
    pub assignment: Assignment,
    pub seed: u64,
    pub out_dir: PathBuf,
}

fn load_plan(path: &Path, g: &InputGraph, n: usize, seed: u64) -> Result<PartitionPlan, Error> {
    let text = io::read_file(path)?;
    let err = |line: usize, msg: String| {
        Error::Format(FormatError::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        })
    };
    let mut owner: BTreeMap<(VertexId, VertexId), PartitionId> = BTreeMap::new();
    let mut masters = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let nums = |ts: &[&str]| -> Result<Vec<u64>, Error> {
            ts.iter()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|e| err(i + 1, format!("bad number {t:?}: {e}")))
                })
                .collect()
        };
        match toks.as_slice() {
            ["master", rest @ ..] if rest.len() == 2 => {
                let x = nums(rest)?;
                masters.push((x[0], x[1] as PartitionId));
            }
            [_, _, _] => {
                let x = nums(&toks)?;
                if owner.insert((x[0], x[1]), x[2] as PartitionId).is_some() {
                    return Err(err(
                        i + 1,
                        format!("edge ({}, {}) assigned twice", x[0], x[1]),
                    ));
                }
            }
            _ => {
                return Err(err(
                    i + 1,
                    "expected `<src> <dst> <partition>` or `master <vertex> <partition>`".into(),
                ))
            }
        }
    }
    let owners = g
        .edges()
        .iter()
        .map(|e| {
            owner.get(&(e.src, e.dst)).copied().ok_or_else(|| {
                Error::Config(format!("plan does not assign edge ({}, {})", e.src, e.dst))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if owner.len() != owners.len() {
        return Err(Error::Config(
            "plan assigns edges that are not in the graph".into(),
        ));
    }
    let mut plan = PartitionPlan::from_owners(g, n, owners, seed)?;
    for (v, p) in masters {
        plan.set_master(v, p)?;
    }
    Ok(plan)
}

/// Loads the edge list, partitions it, and writes the part files and
/// `metrics.json` into `out_dir`.
pub fn partition_files(opts: &PartitionOptions) -> Result<MetricsFile, Error> {
    let g = io::load_edge_list(&opts.input, opts.spec, opts.labels.as_deref())?;
    let plan = match &opts.assignment {
        Assignment::Hash(m) => PartitionPlan::new(&g, opts.num_partitions, *m, opts.seed)?,
        Assignment::Explicit(path) => load_plan(path, &g, opts.num_partitions, opts.seed)?,
    };
    let subgraphs = plan.build_subgraphs(&g)?;
    io::dump_subgraphs(&subgraphs, &opts.out_dir)?;
    let sidecar = params_path(&opts.input);
    let generator = if sidecar.exists() {
        let text = io::read_file(&sidecar)?;
        Some(serde_json::from_str(&text).map_err(|source| Error::Json {
            path: sidecar,
            source,
        })?)
    } else {
        None
    };
    let m = MetricsFile {
        metrics: compute_metrics(&subgraphs),
        method: plan.origin.method.clone(),
        seed: plan.origin.seed,
        generator,
    };
    io::write_metrics(&opts.out_dir, &m)?;
    Ok(m)
}

/// Recomputes the metrics of a dump directory from its part files.
pub fn dir_metrics(dir: &Path) -> Result<PartitionMetrics, Error> {
    Ok(compute_metrics(&io::load_subgraphs(dir)?))
}

#[derive(Debug, Clone)]
pub enum AlgoSpec {
    Cc,
    Sssp { source: VertexId },
    Pr { alpha: f64, epsilon: Option<f64> },
    Gsim { pattern: Pattern },
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub dir: PathBuf,
    pub algo: AlgoSpec,
    pub job: JobConfig,
    pub output: PathBuf,
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub supersteps: u64,
    pub converged: bool,
    pub vertices: usize,
    pub pairs_sent: usize,
}

/// Loads a dump directory, checking its part headers against
/// `metrics.json` when that file is present.
pub fn load_dir(dir: &Path) -> Result<Vec<crate::Subgraph>, Error> {
    let subgraphs = io::load_subgraphs(dir)?;
    if dir.join(io::METRICS_FILE).exists() {
        let m = io::read_metrics(dir)?;
        let header = subgraphs[0].origin();
        let matches = header.is_some_and(|o| o.method == m.method && o.seed == m.seed);
        if !matches {
            return Err(Error::Format(FormatError::Census {
                dir: dir.to_path_buf(),
                msg: format!(
                    "metrics.json says method {} seed {}, part files say {}",
                    m.method,
                    m.seed,
                    header.map_or("nothing".to_string(), |o| format!(
                        "method {} seed {}",
                        o.method, o.seed
                    ))
                ),
            }));
        }
    }
    Ok(subgraphs)
}

fn execute<P: Program>(
    program: &P,
    subgraphs: &[crate::Subgraph],
    opts: &RunOptions,
) -> Result<RunSummary, Error> {
    let result = run_job(program, subgraphs, &opts.job)?;
    let mut text = String::new();
    for (v, out) in &result.values {
        writeln!(text, "{v}\t{}", program.format_output(out)).unwrap();
    }
    std::fs::write(&opts.output, text).map_err(io_error(&opts.output))?;
    if let Some(path) = &opts.stats {
        write_stats(path, &result.stats)?;
    }
    Ok(RunSummary {
        supersteps: result.supersteps,
        converged: result.converged,
        vertices: result.values.len(),
        pairs_sent: result.total_pairs_sent(),
    })
}

fn write_stats(path: &Path, stats: &[SuperstepStats]) -> Result<(), Error> {
    let file = std::fs::File::create(path).map_err(io_error(path))?;
    let mut w = std::io::BufWriter::new(file);
    write_stats_csv(&mut w, stats).map_err(io_error(path))?;
    std::io::Write::flush(&mut w).map_err(io_error(path))
}

/// Runs the chosen program over a dump directory and writes the result
/// file (and stats CSV when requested). Results are written even when the
/// superstep cap stopped the job; check [`RunSummary::converged`].
pub fn run_files(opts: &RunOptions) -> Result<RunSummary, Error> {
    let subgraphs = load_dir(&opts.dir)?;
    match &opts.algo {
        AlgoSpec::Cc => execute(&ConnectedComponents, &subgraphs, opts),
        AlgoSpec::Sssp { source } => execute(&ShortestPaths::new(*source), &subgraphs, opts),
        AlgoSpec::Pr { alpha, epsilon } => execute(
            &PageRank {
                alpha: *alpha,
                epsilon: *epsilon,
            },
            &subgraphs,
            opts,
        ),
        AlgoSpec::Gsim { pattern } => {
            execute(&GraphSimulation::new(pattern.clone()), &subgraphs, opts)
        }
    }
}
