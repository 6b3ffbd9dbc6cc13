use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::subgraph::Subgraph;

/// Balance and replication statistics of a vertex-cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartitionMetrics {
    /// `max_i |E_i| / (|E| / n)`, 1 when the graph has no edges.
    pub imbalance: f64,
    /// `sum_i |V_i| / |V|`.
    pub replication_factor: f64,
    pub edge_counts: Vec<usize>,
    pub vertex_counts: Vec<usize>,
}

/// Computes metrics over the subgraphs of one plan. `|V|` is the size of the
/// union of the partition vertex sets.
pub fn compute_metrics(subgraphs: &[Subgraph]) -> PartitionMetrics {
    let edge_counts: Vec<usize> = subgraphs.iter().map(Subgraph::num_edges).collect();
    let vertex_counts: Vec<usize> = subgraphs.iter().map(Subgraph::num_vertices).collect();
    let total_edges: usize = edge_counts.iter().sum();
    let n = subgraphs.len().max(1);
    let imbalance = if total_edges == 0 {
        1.0
    } else {
        let max = *edge_counts.iter().max().unwrap_or(&0) as f64;
        max / (total_edges as f64 / n as f64)
    };
    let distinct: HashSet<u64> = subgraphs
        .iter()
        .flat_map(|sg| sg.vertex_infos().iter().map(|v| v.id))
        .collect();
    let replication_factor = if distinct.is_empty() {
        1.0
    } else {
        vertex_counts.iter().sum::<usize>() as f64 / distinct.len() as f64
    };
    PartitionMetrics {
        imbalance,
        replication_factor,
        edge_counts,
        vertex_counts,
    }
}
