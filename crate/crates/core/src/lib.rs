//! Vertex-cut graph partitioning and subgraph-centric bulk-synchronous
//! graph processing.
//!
//! Edges are assigned to partitions by a hash rule ([`partition`]); a vertex
//! whose edges land in several partitions is replicated, with one replica
//! elected master. Programs run per partition over a whole [`Subgraph`] and
//! keep replicas coherent by emitting `(vertex, value)` pairs that the
//! [`runtime`] merges at the master and sends back to every replica.

pub mod algo;
pub mod error;
pub mod graph;
pub mod io;
pub mod partition;
pub mod pipeline;
pub mod runtime;
pub mod subgraph;

pub use error::{AlgoError, Error, FormatError, GraphError, PartitionError, RuntimeError};
pub use graph::{Edge, InputGraph, PartitionId, VertexId};
pub use partition::{partition, Method, PartitionMetrics, PartitionPlan};
pub use subgraph::{ReplicaRole, Subgraph};
