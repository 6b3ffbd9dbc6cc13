//! Global input graph: a normalized, immutable directed edge collection.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::GraphError;

pub type VertexId = u64;
pub type PartitionId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: VertexId, dst: VertexId) -> Self {
        Edge {
            src,
            dst,
            weight: 1.0,
        }
    }

    pub fn weighted(src: VertexId, dst: VertexId, weight: f64) -> Self {
        Edge { src, dst, weight }
    }

    /// Endpoints ordered by id, identical for both orientations.
    pub fn canonical(&self) -> (VertexId, VertexId) {
        if self.src <= self.dst {
            (self.src, self.dst)
        } else {
            (self.dst, self.src)
        }
    }
}

/// A directed graph with optional vertex labels.
///
/// Edges are kept sorted by `(src, dst)` with no duplicate pairs. The vertex
/// set is a superset of the edge endpoints so isolated vertices survive.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InputGraph {
    edges: Vec<Edge>,
    vertices: BTreeSet<VertexId>,
    labels: Option<BTreeMap<VertexId, String>>,
}

impl InputGraph {
    /// Normalizes `edges` (duplicates collapse to the minimum weight) and
    /// adds every endpoint and every labeled vertex to the vertex set.
    pub fn new(
        edges: impl IntoIterator<Item = Edge>,
        isolated: impl IntoIterator<Item = VertexId>,
        labels: Option<BTreeMap<VertexId, String>>,
    ) -> Result<Self, GraphError> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            if !e.weight.is_finite() || e.weight < 0.0 {
                return Err(GraphError::InvalidWeight {
                    src: e.src,
                    dst: e.dst,
                    weight: e.weight,
                });
            }
        }
        edges.sort_by(|a, b| {
            (a.src, a.dst)
                .cmp(&(b.src, b.dst))
                .then(a.weight.total_cmp(&b.weight))
        });
        edges.dedup_by(|later, first| later.src == first.src && later.dst == first.dst);

        let mut vertices: BTreeSet<VertexId> = isolated.into_iter().collect();
        for e in &edges {
            vertices.insert(e.src);
            vertices.insert(e.dst);
        }
        if let Some(labels) = &labels {
            vertices.extend(labels.keys().copied());
        }
        Ok(InputGraph {
            edges,
            vertices,
            labels,
        })
    }

    pub fn from_pairs(pairs: &[(VertexId, VertexId)]) -> Self {
        Self::new(pairs.iter().map(|&(s, d)| Edge::new(s, d)), [], None)
            .expect("unit weights are valid")
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn labels(&self) -> Option<&BTreeMap<VertexId, String>> {
        self.labels.as_ref()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.as_ref()?.get(&v).map(String::as_str)
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Adds the reverse of every edge. An undirected input becomes two edges
    /// with opposite directions.
    pub fn symmetrized(&self) -> InputGraph {
        let reversed = self
            .edges
            .iter()
            .map(|e| Edge::weighted(e.dst, e.src, e.weight));
        InputGraph::new(
            self.edges.iter().copied().chain(reversed),
            self.vertices.iter().copied(),
            self.labels.clone(),
        )
        .expect("weights already validated")
    }

    pub fn with_labels(mut self, labels: BTreeMap<VertexId, String>) -> InputGraph {
        self.vertices.extend(labels.keys().copied());
        self.labels = Some(labels);
        self
    }

    pub fn edge_weight(&self, src: VertexId, dst: VertexId) -> Option<f64> {
        self.edges
            .binary_search_by(|e| (e.src, e.dst).cmp(&(src, dst)))
            .ok()
            .map(|i| self.edges[i].weight)
    }
}
