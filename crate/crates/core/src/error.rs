use std::path::PathBuf;

use thiserror::Error;

use crate::graph::{PartitionId, VertexId};

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error(
        "edge ({src}, {dst}) has invalid weight {weight}; weights must be finite and non-negative"
    )]
    InvalidWeight {
        src: VertexId,
        dst: VertexId,
        weight: f64,
    },
    #[error("vertex {vertex} missing from the {table} table")]
    UnknownEndpoint {
        vertex: VertexId,
        table: &'static str,
    },
    #[error("duplicate edge ({src}, {dst}) in partition {partition}")]
    DuplicateEdge {
        src: VertexId,
        dst: VertexId,
        partition: PartitionId,
    },
    #[error("vertex {vertex} listed twice in partition {partition}")]
    DuplicateVertex {
        vertex: VertexId,
        partition: PartitionId,
    },
    #[error("isolated vertex {vertex} also appears as an edge endpoint in partition {partition}")]
    IsolatedNotIsolated {
        vertex: VertexId,
        partition: PartitionId,
    },
    #[error("vertex {vertex} has no replica in partition {partition}")]
    NoReplica {
        vertex: VertexId,
        partition: PartitionId,
    },
    #[error("vertex {vertex} not present in partition {partition}")]
    VertexNotFound {
        vertex: VertexId,
        partition: PartitionId,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("partition count must be at least 1")]
    ZeroPartitions,
    #[error("vertex {0} has no degree entry")]
    MissingDegree(VertexId),
    #[error("vertex {0} has an empty replica set")]
    EmptyReplicaSet(VertexId),
    #[error(
        "edge ({src}, {dst}) assigned to partition {partition}, but only {n} partitions exist"
    )]
    OwnerOutOfRange {
        src: VertexId,
        dst: VertexId,
        partition: PartitionId,
        n: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised by a Compute function or its configuration.
#[derive(Debug, Error, PartialEq)]
pub enum AlgoError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Failed(String),
}

#[derive(Debug, Error)]
pub enum RuntimeError {
    #[error("job configuration error: {0}")]
    Config(String),
    #[error("algorithm failed in partition {partition} at superstep {superstep}: {source}")]
    Algorithm {
        partition: PartitionId,
        superstep: u64,
        source: AlgoError,
    },
    #[error("protocol error at superstep {superstep}: partition {partition} {reason} key {key}")]
    Protocol {
        superstep: u64,
        partition: PartitionId,
        key: VertexId,
        reason: &'static str,
    },
    #[error("replica incoherence at superstep {superstep}: vertex {vertex}: {detail}")]
    Incoherent {
        superstep: u64,
        vertex: VertexId,
        detail: String,
    },
    #[error("transport failure: {0}")]
    Transport(String),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("partition census mismatch in {}: {msg}", dir.display())]
    Census { dir: PathBuf, msg: String },
    #[error("invalid generator parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Crate-level error used by the file pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Algo(#[from] AlgoError),
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}
