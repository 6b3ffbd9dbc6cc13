use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::AlgoError;
use crate::graph::VertexId;
use crate::runtime::{Context, JobInfo, Min, Program};
use crate::subgraph::Subgraph;

/// Single-source shortest paths: Dijkstra inside each partition, with
/// improved frontier distances exchanged between supersteps and pushed back
/// into the local queue. Unweighted inputs carry weight 1 per edge.
#[derive(Debug, Clone, Copy)]
pub struct ShortestPaths {
    pub source: VertexId,
}

impl ShortestPaths {
    pub fn new(source: VertexId) -> Self {
        ShortestPaths { source }
    }
}

#[derive(PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

pub struct SsspState {
    dist: Vec<f64>,
    synced: Vec<f64>,
    queue: BinaryHeap<Reverse<(Dist, usize)>>,
}

impl SsspState {
    fn relax(&mut self, u: usize, d: f64) {
        if d < self.dist[u] {
            self.dist[u] = d;
            self.queue.push(Reverse((Dist(d), u)));
        }
    }

    fn dijkstra(&mut self, sg: &Subgraph) {
        while let Some(Reverse((Dist(d), u))) = self.queue.pop() {
            if d > self.dist[u] {
                continue;
            }
            for (w, weight) in sg.out_edges(u) {
                self.relax(w, d + weight);
            }
        }
    }
}

impl Program for ShortestPaths {
    type Value = f64;
    type Agg = Min;
    type State = SsspState;
    /// `None` for vertices the source cannot reach.
    type Output = Option<f64>;

    fn name(&self) -> &'static str {
        "sssp"
    }

    fn aggregator(&self) -> &Min {
        &Min
    }

    fn prepare(&self, subgraphs: &[Subgraph]) -> Result<(), AlgoError> {
        if !subgraphs
            .iter()
            .any(|sg| sg.local_index(self.source).is_some())
        {
            return Err(AlgoError::Config(format!(
                "source vertex {} is not in the graph",
                self.source
            )));
        }
        for sg in subgraphs {
            if let Some(e) = sg.edges().find(|e| e.weight.is_nan() || e.weight < 0.0) {
                return Err(AlgoError::Config(format!(
                    "edge ({}, {}) has negative weight {}",
                    e.src, e.dst, e.weight
                )));
            }
        }
        Ok(())
    }

    fn init(&self, sg: &Subgraph, _job: &JobInfo) -> Result<SsspState, AlgoError> {
        let n = sg.num_vertices();
        Ok(SsspState {
            dist: vec![f64::INFINITY; n],
            synced: vec![f64::INFINITY; n],
            queue: BinaryHeap::new(),
        })
    }

    fn compute(
        &self,
        sg: &Subgraph,
        st: &mut SsspState,
        inbox: &[(VertexId, f64)],
        ctx: &mut Context<'_, f64>,
    ) -> Result<(), AlgoError> {
        if ctx.superstep() == 0 {
            if let Some(s) = sg.local_index(self.source) {
                st.relax(s, 0.0);
            }
        }
        for &(k, d) in inbox {
            let u = sg
                .local_index(k)
                .ok_or_else(|| AlgoError::Failed(format!("inbox key {k} not local")))?;
            st.synced[u] = d;
            st.relax(u, d);
        }
        st.dijkstra(sg);
        let mut emitted = false;
        for u in sg.frontier_locals() {
            if st.dist[u] < st.synced[u] {
                ctx.add_pair(sg.id_of(u), st.dist[u]);
                emitted = true;
            }
        }
        if !emitted {
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn output(&self, _sg: &Subgraph, st: &SsspState, local: usize) -> Option<f64> {
        Some(st.dist[local]).filter(|d| d.is_finite())
    }

    fn synced_output(&self, _sg: &Subgraph, st: &SsspState, local: usize) -> Option<f64> {
        Some(st.synced[local]).filter(|d| d.is_finite())
    }

    fn outputs_agree(&self, a: &Option<f64>, b: &Option<f64>) -> bool {
        a == b
    }

    fn format_output(&self, out: &Option<f64>) -> String {
        match out {
            Some(d) => format!("{d}"),
            None => "unreachable".to_string(),
        }
    }
}
