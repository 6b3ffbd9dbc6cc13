//! Vertex-cut partitioning: every edge is owned by exactly one partition and
//! vertices whose edges land in several partitions are replicated.
//!
//! Two assigners are provided. Random hashing (RH) hashes the unordered
//! endpoint pair. Canonical degree-based hashing (CDBH) sorts the endpoints
//! by id and hashes the one with the smaller total degree, so high-degree
//! hubs are the vertices that get cut.

mod hash;
mod metrics;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::PartitionError;
use crate::graph::{Edge, InputGraph, PartitionId, VertexId};
use crate::subgraph::{
    build_subgraph, Degree, DegreeTable, Placement, PlanOrigin, RoleTable, Subgraph,
};

pub use hash::{hash64, unit_f64};
pub use metrics::{compute_metrics, PartitionMetrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    RandomHash,
    CanonicalDegreeHash,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::RandomHash => "rh",
            Method::CanonicalDegreeHash => "cdbh",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rh" => Ok(Method::RandomHash),
            "cdbh" => Ok(Method::CanonicalDegreeHash),
            other => Err(format!(
                "unknown partitioning method '{other}' (expected rh or cdbh)"
            )),
        }
    }
}

/// Exact in/out degree counts. Isolated vertices get `(0, 0)`.
pub fn compute_degrees(g: &InputGraph) -> DegreeTable {
    let mut table = DegreeTable::default();
    for &v in g.vertices() {
        table.insert(v, Degree::default());
    }
    for e in g.edges() {
        let s = table.entry(e.src);
        s.total += 1;
        s.out += 1;
        table.entry(e.dst).total += 1;
    }
    table
}

fn check_n(n: usize) -> Result<(), PartitionError> {
    if n == 0 {
        Err(PartitionError::ZeroPartitions)
    } else {
        Ok(())
    }
}

/// Random-hash owner of `e`; both orientations of an edge share an owner.
pub fn assign_edge_rh(e: &Edge, n: usize) -> Result<PartitionId, PartitionError> {
    check_n(n)?;
    let (lo, hi) = e.canonical();
    let key = hash64(lo).wrapping_mul(31).wrapping_add(hash64(hi));
    Ok((hash64(key) % n as u64) as PartitionId)
}

/// Degree-based owner of `e`: the endpoints are ordered by id, then the one
/// with strictly smaller total degree is hashed (the smaller id on ties).
pub fn assign_edge_cdbh(
    e: &Edge,
    degrees: &DegreeTable,
    n: usize,
) -> Result<PartitionId, PartitionError> {
    check_n(n)?;
    let (a, b) = e.canonical();
    let da = degrees
        .get(a)
        .ok_or(PartitionError::MissingDegree(a))?
        .total;
    let db = degrees
        .get(b)
        .ok_or(PartitionError::MissingDegree(b))?
        .total;
    let pivot = if db < da { b } else { a };
    Ok((hash64(pivot) % n as u64) as PartitionId)
}

pub type ReplicaMap = BTreeMap<VertexId, BTreeSet<PartitionId>>;

/// Picks one master per replicated vertex: the replica at index
/// `hash64(v ^ seed) % |set|` in ascending partition order.
pub fn elect_masters(replicas: &ReplicaMap, seed: u64) -> Result<RoleTable, PartitionError> {
    let mut roles = RoleTable::default();
    for (&v, set) in replicas {
        roles.insert(v, elect_one(v, set.iter().copied().collect(), seed)?);
    }
    Ok(roles)
}

fn elect_one(
    v: VertexId,
    replicas: Vec<PartitionId>,
    seed: u64,
) -> Result<Placement, PartitionError> {
    if replicas.is_empty() {
        return Err(PartitionError::EmptyReplicaSet(v));
    }
    let idx = (hash64(v ^ seed) % replicas.len() as u64) as usize;
    Ok(Placement {
        master: replicas[idx],
        replicas,
    })
}

/// Owner of an isolated vertex.
pub fn assign_isolated(v: VertexId, n: usize, seed: u64) -> PartitionId {
    (hash64(v ^ seed) % n as u64) as PartitionId
}

/// A complete edge-to-partition assignment with its routing table.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionPlan {
    pub num_partitions: usize,
    /// Owner of `graph.edges()[i]`.
    pub edge_owner: Vec<PartitionId>,
    pub roles: RoleTable,
    pub isolated_owner: BTreeMap<VertexId, PartitionId>,
    pub degrees: DegreeTable,
    pub origin: PlanOrigin,
}

impl PartitionPlan {
    /// Assigns every edge with `method` and elects masters.
    pub fn new(
        g: &InputGraph,
        n: usize,
        method: Method,
        seed: u64,
    ) -> Result<Self, PartitionError> {
        check_n(n)?;
        let degrees = compute_degrees(g);
        let owners = match method {
            Method::RandomHash => g
                .edges()
                .iter()
                .map(|e| assign_edge_rh(e, n))
                .collect::<Result<Vec<_>, _>>()?,
            Method::CanonicalDegreeHash => g
                .edges()
                .iter()
                .map(|e| assign_edge_cdbh(e, &degrees, n))
                .collect::<Result<Vec<_>, _>>()?,
        };
        Self::assemble(g, n, owners, degrees, method.as_str(), seed)
    }

    /// Uses an explicit owner per edge (aligned with `g.edges()`).
    pub fn from_owners(
        g: &InputGraph,
        n: usize,
        owners: Vec<PartitionId>,
        seed: u64,
    ) -> Result<Self, PartitionError> {
        check_n(n)?;
        assert_eq!(owners.len(), g.num_edges(), "one owner per edge");
        for (e, &p) in g.edges().iter().zip(&owners) {
            if p >= n {
                return Err(PartitionError::OwnerOutOfRange {
                    src: e.src,
                    dst: e.dst,
                    partition: p,
                    n,
                });
            }
        }
        Self::assemble(g, n, owners, compute_degrees(g), "explicit", seed)
    }

    fn assemble(
        g: &InputGraph,
        n: usize,
        owners: Vec<PartitionId>,
        degrees: DegreeTable,
        method: &str,
        seed: u64,
    ) -> Result<Self, PartitionError> {
        let mut replicas: HashMap<VertexId, Vec<PartitionId>> = HashMap::new();
        for (e, &p) in g.edges().iter().zip(&owners) {
            replicas.entry(e.src).or_default().push(p);
            replicas.entry(e.dst).or_default().push(p);
        }
        let mut isolated_owner = BTreeMap::new();
        for &v in g.vertices() {
            if let std::collections::hash_map::Entry::Vacant(slot) = replicas.entry(v) {
                let p = assign_isolated(v, n, seed);
                isolated_owner.insert(v, p);
                slot.insert(vec![p]);
            }
        }
        let mut roles = RoleTable::default();
        for (v, mut set) in replicas {
            set.sort_unstable();
            set.dedup();
            roles.insert(v, elect_one(v, set, seed)?);
        }
        Ok(PartitionPlan {
            num_partitions: n,
            edge_owner: owners,
            roles,
            isolated_owner,
            degrees,
            origin: PlanOrigin {
                method: method.to_string(),
                seed,
            },
        })
    }

    /// Moves the master of a replicated vertex to partition `p`.
    pub fn set_master(&mut self, v: VertexId, p: PartitionId) -> Result<(), PartitionError> {
        let placement = self
            .roles
            .get_mut(v)
            .ok_or(PartitionError::EmptyReplicaSet(v))?;
        if placement.replicas.binary_search(&p).is_err() {
            return Err(crate::error::GraphError::NoReplica {
                vertex: v,
                partition: p,
            }
            .into());
        }
        placement.master = p;
        Ok(())
    }

    /// Materializes one subgraph per partition, ordered by partition id.
    pub fn build_subgraphs(&self, g: &InputGraph) -> Result<Vec<Subgraph>, PartitionError> {
        let n = self.num_partitions;
        let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); n];
        for (e, &p) in g.edges().iter().zip(&self.edge_owner) {
            edges[p].push(*e);
        }
        let mut isolated: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for (&v, &p) in &self.isolated_owner {
            isolated[p].push(v);
        }
        let labels = g.labels();
        let results: Vec<Result<Subgraph, PartitionError>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..n)
                .map(|p| {
                    let (edges, isolated) = (&edges[p], &isolated[p]);
                    s.spawn(move || {
                        build_subgraph(p, n, edges, &self.degrees, &self.roles, isolated, labels)
                            .map(|sg| sg.with_origin(self.origin.clone()))
                            .map_err(PartitionError::from)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("subgraph construction panicked"))
                .collect()
        });
        results.into_iter().collect()
    }
}

/// Partitions `g` into `n` subgraphs and reports the partition metrics.
pub fn partition(
    g: &InputGraph,
    n: usize,
    method: Method,
    seed: u64,
) -> Result<(Vec<Subgraph>, PartitionMetrics), PartitionError> {
    let plan = PartitionPlan::new(g, n, method, seed)?;
    let subgraphs = plan.build_subgraphs(g)?;
    let metrics = compute_metrics(&subgraphs);
    Ok((subgraphs, metrics))
}
