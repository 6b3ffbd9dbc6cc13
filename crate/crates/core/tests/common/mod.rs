//! Sequential reference implementations and graph builders shared by the
//! integration tests.

#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vcgraph::algo::Pattern;
use vcgraph::partition::PartitionPlan;
use vcgraph::runtime::{Execution, JobConfig};
use vcgraph::{Edge, InputGraph, Method, Subgraph, VertexId};

pub fn checked(execution: Execution) -> JobConfig {
    JobConfig {
        execution,
        check_coherence: true,
        ..JobConfig::default()
    }
}

pub fn split(g: &InputGraph, n: usize, method: Method, seed: u64) -> Vec<Subgraph> {
    PartitionPlan::new(g, n, method, seed)
        .unwrap()
        .build_subgraphs(g)
        .unwrap()
}

/// Weakly connected components, labeled by minimum member id.
pub fn union_find_cc(g: &InputGraph) -> BTreeMap<VertexId, VertexId> {
    let ids: Vec<VertexId> = g.vertices().iter().copied().collect();
    let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in g.edges() {
        let a = find(&mut parent, index[&e.src]);
        let b = find(&mut parent, index[&e.dst]);
        // Ids are sorted, so keeping the smaller root keeps the minimum.
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        parent[hi] = lo;
    }
    (0..ids.len())
        .map(|i| (ids[i], ids[find(&mut parent, i)]))
        .collect()
}

#[derive(PartialEq)]
struct Key(f64);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&o.0)
    }
}

/// Textbook Dijkstra over the whole graph; `None` marks unreachable.
pub fn dijkstra(g: &InputGraph, source: VertexId) -> BTreeMap<VertexId, Option<f64>> {
    let mut adj: HashMap<VertexId, Vec<(VertexId, f64)>> = HashMap::new();
    for e in g.edges() {
        adj.entry(e.src).or_default().push((e.dst, e.weight));
    }
    let mut dist: HashMap<VertexId, f64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(source, 0.0);
    heap.push(Reverse((Key(0.0), source)));
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if d > dist[&u] {
            continue;
        }
        for &(w, c) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            let nd = d + c;
            if dist.get(&w).is_none_or(|&old| nd < old) {
                dist.insert(w, nd);
                heap.push(Reverse((Key(nd), w)));
            }
        }
    }
    g.vertices()
        .iter()
        .map(|&v| (v, dist.get(&v).copied()))
        .collect()
}

/// Jacobi iteration of `PR(u) = α Σ_{v→u} PR(v)/outdeg(v) + (1-α)/N`,
/// dangling mass dropped.
pub fn jacobi_pagerank(g: &InputGraph, alpha: f64, iterations: usize) -> BTreeMap<VertexId, f64> {
    let ids: Vec<VertexId> = g.vertices().iter().copied().collect();
    let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = ids.len();
    let mut out_deg = vec![0usize; n];
    for e in g.edges() {
        out_deg[index[&e.src]] += 1;
    }
    let base = (1.0 - alpha) / n as f64;
    let mut pr = vec![base; n];
    for _ in 0..iterations {
        let mut next = vec![base; n];
        for e in g.edges() {
            let s = index[&e.src];
            next[index[&e.dst]] += alpha * pr[s] / out_deg[s] as f64;
        }
        pr = next;
    }
    ids.into_iter().zip(pr).collect()
}

/// Maximal graph simulation by repeated full scans until nothing changes.
pub fn naive_simulation(g: &InputGraph, q: &Pattern) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
    let mut out: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for e in g.edges() {
        out.entry(e.src).or_default().push(e.dst);
    }
    let mut sim: Vec<BTreeSet<VertexId>> = (0..q.len())
        .map(|u| {
            g.vertices()
                .iter()
                .copied()
                .filter(|&v| g.label(v) == Some(q.label(u)))
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for u in 0..q.len() {
            let keep: BTreeSet<VertexId> = sim[u]
                .iter()
                .copied()
                .filter(|v| {
                    q.successors(u).iter().all(|&u2| {
                        out.get(v)
                            .is_some_and(|ns| ns.iter().any(|w| sim[u2].contains(w)))
                    })
                })
                .collect();
            if keep.len() != sim[u].len() {
                sim[u] = keep;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    q.ids().iter().copied().zip(sim).collect()
}

/// `n` vertices, `m` random directed edges with weights uniform in [0, 10].
pub fn random_weighted(n: u64, m: usize, seed: u64) -> InputGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let edges: Vec<Edge> = (0..m)
        .map(|_| {
            Edge::weighted(
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0.0..=10.0),
            )
        })
        .collect();
    InputGraph::new(edges, 0..n, None).unwrap()
}

pub const LABELS: [&str; 4] = ["a", "b", "c", "d"];

/// `n` vertices with one of four labels each and `m` random edges.
pub fn random_labeled(n: u64, m: usize, seed: u64) -> InputGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let edges: Vec<Edge> = (0..m)
        .map(|_| Edge::new(rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    let labels = (0..n)
        .map(|v| (v, LABELS[rng.gen_range(0..4)].to_string()))
        .collect();
    InputGraph::new(edges, 0..n, Some(labels)).unwrap()
}

/// A pattern with 1 to 5 vertices and random edges.
pub fn random_pattern(seed: u64) -> Pattern {
    let mut rng = StdRng::seed_from_u64(seed);
    let k = rng.gen_range(1..=5u64);
    let vertices: Vec<(VertexId, String)> = (0..k)
        .map(|u| (u, LABELS[rng.gen_range(0..4)].to_string()))
        .collect();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if rng.gen_bool(0.3) {
                edges.push((a, b));
            }
        }
    }
    Pattern::new(vertices, edges).unwrap()
}

/// The 7-vertex example with A..G = 0..6, split into three subgraphs that
/// share D and G, with both masters placed in the second subgraph.
pub fn golden_example() -> (InputGraph, Vec<Subgraph>) {
    let (a, b, c, d, e, f, gv) = (0, 1, 2, 3, 4, 5, 6);
    let pairs = [
        (a, d),
        (a, gv),
        (b, d),
        (b, gv),
        (c, gv),
        (c, e),
        (e, f),
        (f, gv),
    ];
    let owner_of = |p: (u64, u64)| match pairs.iter().position(|&x| x == p).unwrap() {
        0 | 1 => 0,
        2 | 3 => 1,
        _ => 2,
    };
    let g = InputGraph::from_pairs(&pairs);
    let owners = g.edges().iter().map(|e| owner_of((e.src, e.dst))).collect();
    let mut plan = PartitionPlan::from_owners(&g, 3, owners, 0).unwrap();
    plan.set_master(d, 1).unwrap();
    plan.set_master(gv, 1).unwrap();
    let sgs = plan.build_subgraphs(&g).unwrap();
    (g, sgs)
}

pub fn linf(a: &BTreeMap<VertexId, f64>, b: &BTreeMap<VertexId, f64>) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().map(|(k, x)| (x - b[k]).abs()).fold(0.0, f64::max)
}
