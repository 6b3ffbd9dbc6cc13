//! Per-partition data subgraphs: local adjacency, full degrees, replica
//! roles and the routing information carried by each frontier vertex.

use std::collections::{BTreeMap, HashMap};

use crate::error::GraphError;
use crate::graph::{Edge, PartitionId, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Degree {
    /// In-degree plus out-degree in the global graph.
    pub total: u64,
    pub out: u64,
}

impl Degree {
    pub fn in_degree(&self) -> u64 {
        self.total - self.out
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DegreeTable(HashMap<VertexId, Degree>);

impl DegreeTable {
    pub fn get(&self, v: VertexId) -> Option<Degree> {
        self.0.get(&v).copied()
    }

    pub fn insert(&mut self, v: VertexId, d: Degree) {
        self.0.insert(v, d);
    }

    pub fn entry(&mut self, v: VertexId) -> &mut Degree {
        self.0.entry(v).or_default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Degree)> + '_ {
        self.0.iter().map(|(&v, &d)| (v, d))
    }
}

/// Role of one replica of a vertex inside one partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplicaRole {
    Internal,
    /// The authoritative replica; `mirrors` lists the partitions holding
    /// the other replicas, ascending.
    Master {
        mirrors: Vec<PartitionId>,
    },
    Mirror {
        master: PartitionId,
    },
}

impl ReplicaRole {
    pub fn is_frontier(&self) -> bool {
        !matches!(self, ReplicaRole::Internal)
    }

    pub fn is_master(&self) -> bool {
        matches!(self, ReplicaRole::Master { .. })
    }

    /// Partition that aggregates updates for this vertex.
    pub fn master_partition(&self, own: PartitionId) -> PartitionId {
        match self {
            ReplicaRole::Mirror { master } => *master,
            _ => own,
        }
    }
}

/// Global placement of one vertex: every partition holding a replica and
/// which of them is the master.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub master: PartitionId,
    /// Ascending, contains `master`.
    pub replicas: Vec<PartitionId>,
}

impl Placement {
    pub fn single(p: PartitionId) -> Self {
        Placement {
            master: p,
            replicas: vec![p],
        }
    }

    pub fn is_frontier(&self) -> bool {
        self.replicas.len() > 1
    }

    pub fn role_in(&self, p: PartitionId) -> Option<ReplicaRole> {
        if self.replicas.binary_search(&p).is_err() {
            return None;
        }
        Some(if !self.is_frontier() {
            ReplicaRole::Internal
        } else if p == self.master {
            ReplicaRole::Master {
                mirrors: self.replicas.iter().copied().filter(|&q| q != p).collect(),
            }
        } else {
            ReplicaRole::Mirror {
                master: self.master,
            }
        })
    }
}

/// Global routing table: vertex → placement.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoleTable(HashMap<VertexId, Placement>);

impl RoleTable {
    pub fn get(&self, v: VertexId) -> Option<&Placement> {
        self.0.get(&v)
    }

    pub fn insert(&mut self, v: VertexId, p: Placement) {
        self.0.insert(v, p);
    }

    pub fn get_mut(&mut self, v: VertexId) -> Option<&mut Placement> {
        self.0.get_mut(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Placement)> + '_ {
        self.0.iter().map(|(&v, p)| (v, p))
    }
}

/// Method and seed of the plan that produced a subgraph, when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanOrigin {
    pub method: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexInfo {
    pub id: VertexId,
    pub full_degree: u64,
    pub out_degree: u64,
    pub role: ReplicaRole,
    pub label: Option<String>,
}

/// Compressed sorted adjacency in one direction. Neighbor lists are local
/// vertex ordinals sorted ascending.
#[derive(Debug, Clone, PartialEq, Default)]
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

impl Adjacency {
    fn build(n: usize, mut pairs: Vec<(u32, u32, f64)>) -> Self {
        pairs.sort_by_key(|&(a, b, _)| (a, b));
        let mut offsets = vec![0usize; n + 1];
        for &(a, _, _) in &pairs {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Adjacency {
            offsets,
            targets: pairs.iter().map(|p| p.1).collect(),
            weights: pairs.iter().map(|p| p.2).collect(),
        }
    }

    fn range(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }
}

/// One partition's share of the graph: its owned edges, every vertex those
/// edges touch plus its assigned isolated vertices, and the replica role of
/// each vertex. Structure is immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    partition: PartitionId,
    num_partitions: usize,
    origin: Option<PlanOrigin>,
    vertices: Vec<VertexInfo>,
    index: HashMap<VertexId, u32>,
    out_adj: Adjacency,
    in_adj: Adjacency,
    frontier: Vec<u32>,
}

/// Builds the subgraph of partition `partition` from its assigned edges and
/// the global degree and role tables.
pub fn build_subgraph(
    partition: PartitionId,
    num_partitions: usize,
    edges: &[Edge],
    degrees: &DegreeTable,
    roles: &RoleTable,
    isolated: &[VertexId],
    labels: Option<&BTreeMap<VertexId, String>>,
) -> Result<Subgraph, GraphError> {
    let mut ids: Vec<VertexId> = edges.iter().flat_map(|e| [e.src, e.dst]).collect();
    ids.sort_unstable();
    ids.dedup();
    for &v in isolated {
        if ids.binary_search(&v).is_ok() {
            return Err(GraphError::IsolatedNotIsolated {
                vertex: v,
                partition,
            });
        }
    }
    ids.extend_from_slice(isolated);
    ids.sort_unstable();
    ids.dedup();

    let mut infos = Vec::with_capacity(ids.len());
    for &v in &ids {
        let degree = degrees.get(v).ok_or(GraphError::UnknownEndpoint {
            vertex: v,
            table: "degree",
        })?;
        let placement = roles.get(v).ok_or(GraphError::UnknownEndpoint {
            vertex: v,
            table: "role",
        })?;
        let role = placement.role_in(partition).ok_or(GraphError::NoReplica {
            vertex: v,
            partition,
        })?;
        infos.push(VertexInfo {
            id: v,
            full_degree: degree.total,
            out_degree: degree.out,
            role,
            label: labels.and_then(|l| l.get(&v).cloned()),
        });
    }
    Subgraph::assemble(partition, num_partitions, infos, edges.to_vec())
}

impl Subgraph {
    /// Assembles a subgraph from explicit vertex records and edges.
    /// Vertex records may arrive in any order; every edge endpoint must have
    /// a record.
    pub fn assemble(
        partition: PartitionId,
        num_partitions: usize,
        mut vertices: Vec<VertexInfo>,
        mut edges: Vec<Edge>,
    ) -> Result<Subgraph, GraphError> {
        vertices.sort_by_key(|v| v.id);
        if let Some(w) = vertices.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GraphError::DuplicateVertex {
                vertex: w[0].id,
                partition,
            });
        }
        let index: HashMap<VertexId, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id, i as u32))
            .collect();

        edges.sort_by_key(|e| (e.src, e.dst));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].src, w[0].dst) == (w[1].src, w[1].dst))
        {
            return Err(GraphError::DuplicateEdge {
                src: w[0].src,
                dst: w[0].dst,
                partition,
            });
        }
        let mut local = Vec::with_capacity(edges.len());
        for e in &edges {
            let lookup = |v: VertexId| {
                index.get(&v).copied().ok_or(GraphError::UnknownEndpoint {
                    vertex: v,
                    table: "vertex",
                })
            };
            local.push((lookup(e.src)?, lookup(e.dst)?, e.weight));
        }
        let n = vertices.len();
        let in_pairs = local.iter().map(|&(a, b, w)| (b, a, w)).collect();
        let out_adj = Adjacency::build(n, local);
        let in_adj = Adjacency::build(n, in_pairs);
        let frontier = vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.role.is_frontier())
            .map(|(i, _)| i as u32)
            .collect();
        Ok(Subgraph {
            partition,
            num_partitions,
            origin: None,
            vertices,
            index,
            out_adj,
            in_adj,
            frontier,
        })
    }

    pub fn with_origin(mut self, origin: PlanOrigin) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn partition(&self) -> PartitionId {
        self.partition
    }

    pub fn num_partitions(&self) -> usize {
        self.num_partitions
    }

    pub fn origin(&self) -> Option<&PlanOrigin> {
        self.origin.as_ref()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out_adj.targets.len()
    }

    // ---- id-based query API ----

    pub fn vertex(&self, id: VertexId) -> Result<VertexRef<'_>, GraphError> {
        self.local(id).map(|local| VertexRef { sg: self, local })
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexRef<'_>> + '_ {
        (0..self.vertices.len()).map(move |local| VertexRef { sg: self, local })
    }

    /// Masters and mirrors of this partition, ascending by id.
    pub fn frontier_vertices(&self) -> impl Iterator<Item = VertexRef<'_>> + '_ {
        self.frontier.iter().map(move |&l| VertexRef {
            sg: self,
            local: l as usize,
        })
    }

    pub fn masters(&self) -> impl Iterator<Item = VertexRef<'_>> + '_ {
        self.frontier_vertices().filter(|v| v.role().is_master())
    }

    pub fn mirrors(&self) -> impl Iterator<Item = VertexRef<'_>> + '_ {
        self.frontier_vertices().filter(|v| !v.role().is_master())
    }

    /// Sources of the local in-edges of `id`.
    pub fn parents(&self, id: VertexId) -> Result<Vec<VertexId>, GraphError> {
        let l = self.local(id)?;
        Ok(self.in_edges(l).map(|(u, _)| self.id_of(u)).collect())
    }

    /// Targets of the local out-edges of `id`.
    pub fn children(&self, id: VertexId) -> Result<Vec<VertexId>, GraphError> {
        let l = self.local(id)?;
        Ok(self.out_edges(l).map(|(u, _)| self.id_of(u)).collect())
    }

    /// Weight of edge `(src, dst)` if this partition owns it.
    pub fn edge(&self, src: VertexId, dst: VertexId) -> Option<f64> {
        let (s, d) = (*self.index.get(&src)?, *self.index.get(&dst)?);
        let r = self.out_adj.range(s as usize);
        let pos = self.out_adj.targets[r.clone()].binary_search(&d).ok()?;
        Some(self.out_adj.weights[r.start + pos])
    }

    /// Full (global in + out) degree.
    pub fn degree(&self, id: VertexId) -> Result<u64, GraphError> {
        Ok(self.vertices[self.local(id)?].full_degree)
    }

    /// Owned edges ordered by `(src, dst)`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.vertices.len()).flat_map(move |u| {
            let src = self.vertices[u].id;
            self.out_edges(u)
                .map(move |(v, w)| Edge::weighted(src, self.vertices[v].id, w))
        })
    }

    // ---- local-ordinal API used by compute kernels ----

    /// Local ordinal of `id`. Ordinals follow ascending vertex id.
    pub fn local_index(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).map(|&l| l as usize)
    }

    fn local(&self, id: VertexId) -> Result<usize, GraphError> {
        self.local_index(id).ok_or(GraphError::VertexNotFound {
            vertex: id,
            partition: self.partition,
        })
    }

    pub fn id_of(&self, local: usize) -> VertexId {
        self.vertices[local].id
    }

    pub fn info(&self, local: usize) -> &VertexInfo {
        &self.vertices[local]
    }

    pub fn vertex_infos(&self) -> &[VertexInfo] {
        &self.vertices
    }

    pub fn is_frontier(&self, local: usize) -> bool {
        self.vertices[local].role.is_frontier()
    }

    pub fn frontier_locals(&self) -> impl Iterator<Item = usize> + '_ {
        self.frontier.iter().map(|&l| l as usize)
    }

    pub fn out_edges(&self, local: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.out_adj.range(local);
        self.out_adj.targets[r.clone()]
            .iter()
            .zip(&self.out_adj.weights[r])
            .map(|(&t, &w)| (t as usize, w))
    }

    pub fn in_edges(&self, local: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.in_adj.range(local);
        self.in_adj.targets[r.clone()]
            .iter()
            .zip(&self.in_adj.weights[r])
            .map(|(&t, &w)| (t as usize, w))
    }

    pub fn local_degree(&self, local: usize) -> usize {
        self.out_adj.range(local).len() + self.in_adj.range(local).len()
    }
}

/// Read view of one vertex replica.
#[derive(Clone, Copy)]
pub struct VertexRef<'a> {
    sg: &'a Subgraph,
    local: usize,
}

impl<'a> VertexRef<'a> {
    pub fn id(&self) -> VertexId {
        self.sg.vertices[self.local].id
    }

    pub fn local(&self) -> usize {
        self.local
    }

    pub fn degree(&self) -> u64 {
        self.sg.vertices[self.local].full_degree
    }

    pub fn out_degree(&self) -> u64 {
        self.sg.vertices[self.local].out_degree
    }

    pub fn role(&self) -> &'a ReplicaRole {
        &self.sg.vertices[self.local].role
    }

    pub fn label(&self) -> Option<&'a str> {
        self.sg.vertices[self.local].label.as_deref()
    }

    pub fn is_frontier(&self) -> bool {
        self.role().is_frontier()
    }

    pub fn children(&self) -> impl Iterator<Item = VertexId> + 'a {
        let sg = self.sg;
        sg.out_edges(self.local).map(move |(u, _)| sg.id_of(u))
    }

    pub fn parents(&self) -> impl Iterator<Item = VertexId> + 'a {
        let sg = self.sg;
        sg.in_edges(self.local).map(move |(u, _)| sg.id_of(u))
    }
}

impl std::fmt::Debug for VertexRef<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VertexRef")
            .field("id", &self.id())
            .field("partition", &self.sg.partition)
            .finish()
    }
}
