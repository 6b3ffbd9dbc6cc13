//! Text dump of one subgraph per file:
//!
//! ```text
//! P <partition> <num_partitions> [<method> <seed>]
//! V <id> <full_degree> <out_degree> I [label]
//! V <id> <full_degree> <out_degree> A <mirror,partitions> [label]
//! V <id> <full_degree> <out_degree> R <master_partition> [label]
//! E <src> <dst> <weight>
//! ```
//!
//! `V` lines are sorted by id and `E` lines by `(src, dst)`. Weights carry
//! 17 significant digits so they survive a round trip bit-exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::graph::{Edge, PartitionId};
use crate::io::{io_err, read_file};
use crate::partition::PartitionMetrics;
use crate::subgraph::{PlanOrigin, ReplicaRole, Subgraph, VertexInfo};

pub const METRICS_FILE: &str = "metrics.json";

pub fn part_file_name(partition: PartitionId, n: usize) -> String {
    format!("part-{partition}-of-{n}.sg")
}

pub fn format_subgraph(sg: &Subgraph) -> String {
    let mut s = String::new();
    write!(s, "P {} {}", sg.partition(), sg.num_partitions()).unwrap();
    if let Some(o) = sg.origin() {
        write!(s, " {} {}", o.method, o.seed).unwrap();
    }
    s.push('\n');
    for v in sg.vertex_infos() {
        write!(s, "V {} {} {}", v.id, v.full_degree, v.out_degree).unwrap();
        match &v.role {
            ReplicaRole::Internal => s.push_str(" I"),
            ReplicaRole::Master { mirrors } => {
                let list: Vec<String> = mirrors.iter().map(ToString::to_string).collect();
                write!(s, " A {}", list.join(",")).unwrap();
            }
            ReplicaRole::Mirror { master } => write!(s, " R {master}").unwrap(),
        }
        if let Some(l) = &v.label {
            write!(s, " {l}").unwrap();
        }
        s.push('\n');
    }
    for e in sg.edges() {
        writeln!(s, "E {} {} {:.16e}", e.src, e.dst, e.weight).unwrap();
    }
    s
}

pub fn parse_subgraph(text: &str, path: &Path) -> Result<Subgraph, FormatError> {
    let err = |line: usize, msg: String| FormatError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    fn num<T: std::str::FromStr>(
        tok: &str,
        what: &str,
        line: usize,
        path: &Path,
    ) -> Result<T, FormatError>
    where
        T::Err: std::fmt::Display,
    {
        tok.parse().map_err(|e| FormatError::Parse {
            path: path.to_path_buf(),
            line,
            msg: format!("bad {what} {tok:?}: {e}"),
        })
    }

    let mut header: Option<(PartitionId, usize, Option<PlanOrigin>)> = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first().copied() {
            None => continue,
            Some("P") => {
                if header.is_some() {
                    return Err(err(line, "second P line".into()));
                }
                let origin = match toks.len() {
                    3 => None,
                    5 => Some(PlanOrigin {
                        method: toks[3].to_string(),
                        seed: num(toks[4], "seed", line, path)?,
                    }),
                    _ => {
                        return Err(err(
                            line,
                            "expected `P <partition> <count> [<method> <seed>]`".into(),
                        ))
                    }
                };
                let p = num(toks[1], "partition id", line, path)?;
                let n = num(toks[2], "partition count", line, path)?;
                if p >= n {
                    return Err(err(
                        line,
                        format!("partition {p} out of range for {n} partitions"),
                    ));
                }
                header = Some((p, n, origin));
            }
            Some(_) if header.is_none() => return Err(err(line, "record before P line".into())),
            Some("V") => {
                if !(5..=7).contains(&toks.len()) {
                    return Err(err(line, "malformed V line".into()));
                }
                let (role, rest) = match toks[4] {
                    "I" => (ReplicaRole::Internal, &toks[5..]),
                    "A" if toks.len() >= 6 => {
                        let mirrors = toks[5]
                            .split(',')
                            .map(|t| num(t, "mirror partition", line, path))
                            .collect::<Result<Vec<PartitionId>, _>>()?;
                        (ReplicaRole::Master { mirrors }, &toks[6..])
                    }
                    "R" if toks.len() >= 6 => (
                        ReplicaRole::Mirror {
                            master: num(toks[5], "master partition", line, path)?,
                        },
                        &toks[6..],
                    ),
                    other => return Err(err(line, format!("bad role {other:?}"))),
                };
                if rest.len() > 1 {
                    return Err(err(line, "trailing tokens".into()));
                }
                vertices.push(VertexInfo {
                    id: num(toks[1], "vertex id", line, path)?,
                    full_degree: num(toks[2], "degree", line, path)?,
                    out_degree: num(toks[3], "out-degree", line, path)?,
                    role,
                    label: rest.first().map(|l| l.to_string()),
                });
            }
            Some("E") => {
                if toks.len() != 4 {
                    return Err(err(line, "expected `E <src> <dst> <weight>`".into()));
                }
                edges.push(Edge::weighted(
                    num(toks[1], "vertex id", line, path)?,
                    num(toks[2], "vertex id", line, path)?,
                    num(toks[3], "weight", line, path)?,
                ));
            }
            Some(other) => return Err(err(line, format!("unknown record type {other:?}"))),
        }
    }
    let (p, n, origin) = header.ok_or_else(|| err(0, "missing P line".into()))?;
    let sg = Subgraph::assemble(p, n, vertices, edges)?;
    Ok(match origin {
        Some(o) => sg.with_origin(o),
        None => sg,
    })
}

pub fn dump_subgraphs(subgraphs: &[Subgraph], dir: &Path) -> Result<(), FormatError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    for sg in subgraphs {
        let path = dir.join(part_file_name(sg.partition(), sg.num_partitions()));
        std::fs::write(&path, format_subgraph(sg)).map_err(io_err(&path))?;
    }
    Ok(())
}

/// Loads every `part-*-of-*.sg` file in `dir`, ordered by partition id.
/// Fails unless the files form exactly one complete set `0..n`.
pub fn load_subgraphs(dir: &Path) -> Result<Vec<Subgraph>, FormatError> {
    let census = |msg: String| FormatError::Census {
        dir: dir.to_path_buf(),
        msg,
    };
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("part-") && name.ends_with(".sg") {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(census("no part-*.sg files".into()));
    }
    let mut subgraphs = files
        .iter()
        .map(|f| parse_subgraph(&read_file(f)?, f))
        .collect::<Result<Vec<_>, _>>()?;
    subgraphs.sort_by_key(Subgraph::partition);
    let n = subgraphs.len();
    for (i, (sg, f)) in subgraphs.iter().zip(&files).enumerate() {
        if sg.num_partitions() != n {
            return Err(census(format!(
                "{} declares {} partitions but {n} files are present",
                f.display(),
                sg.num_partitions()
            )));
        }
        if sg.partition() != i {
            return Err(census(format!("partition {i} is missing or duplicated")));
        }
    }
    for sg in &subgraphs[1..] {
        if sg.origin() != subgraphs[0].origin() {
            return Err(census("part files come from different plans".into()));
        }
    }
    Ok(subgraphs)
}

/// Contents of `metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsFile {
    #[serde(flatten)]
    pub metrics: PartitionMetrics,
    pub method: String,
    pub seed: u64,
    /// Generator settings, when the input came from the generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<serde_json::Value>,
}

pub fn write_metrics(dir: &Path, m: &MetricsFile) -> Result<(), FormatError> {
    let path = dir.join(METRICS_FILE);
    let mut text = serde_json::to_string_pretty(m).expect("metrics serialize");
    text.push('\n');
    std::fs::write(&path, text).map_err(io_err(&path))
}

pub fn read_metrics(dir: &Path) -> Result<MetricsFile, FormatError> {
    let path = dir.join(METRICS_FILE);
    let text = read_file(&path)?;
    serde_json::from_str(&text).map_err(|e| FormatError::Parse {
        line: e.line(),
        msg: e.to_string(),
        path,
    })
}
