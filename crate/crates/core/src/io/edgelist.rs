use std::collections::BTreeMap;
use std::io::{BufWriter, Write};
use std::path::Path;

use log::warn;

use crate::error::FormatError;
use crate::graph::{Edge, InputGraph, VertexId};
use crate::io::{io_err, read_file};

/// How to read an edge-list file: one `src dst [weight]` line per edge,
/// blank lines and lines starting with `#` ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListSpec {
    /// When false every edge is also added in the opposite direction.
    pub directed: bool,
    /// When false a third column is ignored and every weight is 1.
    pub weighted: bool,
}

impl Default for EdgeListSpec {
    fn default() -> Self {
        EdgeListSpec {
            directed: true,
            weighted: false,
        }
    }
}

fn parse_err(path: &Path, line: usize, msg: String) -> FormatError {
    FormatError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_id(path: &Path, line: usize, tok: &str) -> Result<VertexId, FormatError> {
    tok.parse()
        .map_err(|e| parse_err(path, line, format!("bad vertex id {tok:?}: {e}")))
}

/// Parses edge-list text; `path` only labels error messages.
pub fn parse_edge_list(
    text: &str,
    path: &Path,
    spec: EdgeListSpec,
) -> Result<Vec<Edge>, FormatError> {
    let mut edges = Vec::new();
    for (line, toks) in data_lines(text) {
        if !(2..=3).contains(&toks.len()) {
            return Err(parse_err(
                path,
                line,
                format!("expected 2 or 3 columns, found {}", toks.len()),
            ));
        }
        let src = parse_id(path, line, toks[0])?;
        let dst = parse_id(path, line, toks[1])?;
        let weight = match (spec.weighted, toks.get(2)) {
            (true, Some(t)) => {
                let w: f64 = t
                    .parse()
                    .map_err(|e| parse_err(path, line, format!("bad weight {t:?}: {e}")))?;
                if !w.is_finite() || w < 0.0 {
                    return Err(parse_err(
                        path,
                        line,
                        format!("weight {w} is not a non-negative number"),
                    ));
                }
                w
            }
            (true, None) => return Err(parse_err(path, line, "missing weight column".into())),
            (false, _) => 1.0,
        };
        edges.push(Edge::weighted(src, dst, weight));
        if !spec.directed {
            edges.push(Edge::weighted(dst, src, weight));
        }
    }
    Ok(edges)
}

/// Parses `<id> <label>` lines.
pub fn parse_labels(text: &str, path: &Path) -> Result<BTreeMap<VertexId, String>, FormatError> {
    let mut labels = BTreeMap::new();
    for (line, toks) in data_lines(text) {
        if toks.len() != 2 {
            return Err(parse_err(
                path,
                line,
                format!("expected `<id> <label>`, found {} columns", toks.len()),
            ));
        }
        let id = parse_id(path, line, toks[0])?;
        if labels.insert(id, toks[1].to_string()).is_some() {
            return Err(parse_err(path, line, format!("vertex {id} labeled twice")));
        }
    }
    Ok(labels)
}

pub fn load_labels(path: &Path) -> Result<BTreeMap<VertexId, String>, FormatError> {
    parse_labels(&read_file(path)?, path)
}

/// Loads an edge list and optionally joins a label file. Labeled vertices
/// that no edge mentions enter the graph as isolated vertices.
pub fn load_edge_list(
    path: &Path,
    spec: EdgeListSpec,
    labels: Option<&Path>,
) -> Result<InputGraph, FormatError> {
    let edges = parse_edge_list(&read_file(path)?, path, spec)?;
    let labels = labels.map(load_labels).transpose()?;
    let g = InputGraph::new(edges, [], None)?;
    let Some(labels) = labels else { return Ok(g) };
    let unknown = labels.keys().filter(|v| !g.vertices().contains(v)).count();
    if unknown > 0 {
        warn!("{unknown} labeled vertices have no edges; adding them as isolated vertices");
    }
    Ok(g.with_labels(labels))
}

/// Writes `src dst` lines, or `src dst weight` when `weighted`.
pub fn write_edge_list(
    path: &Path,
    edges: impl IntoIterator<Item = Edge>,
    weighted: bool,
) -> Result<(), FormatError> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    for e in edges {
        if weighted {
            writeln!(w, "{} {} {:.16e}", e.src, e.dst, e.weight)
        } else {
            writeln!(w, "{} {}", e.src, e.dst)
        }
        .map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}
