use crate::error::AlgoError;
use crate::graph::VertexId;
use crate::runtime::{Context, JobInfo, Program, Sum};
use crate::subgraph::Subgraph;

/// Accumulative PageRank: every vertex holds a value and a pending delta
/// `δ`; applying `δ(u)` adds it to the value and pushes `α·δ(u)/outdeg(u)`
/// along each out-edge. The fixpoint is
/// `PR(u) = α · Σ_{v→u} PR(v)/outdeg(v) + (1-α)/N`.
///
/// Contributions aimed at frontier vertices are withheld and summed across
/// partitions by the runtime, so a frontier delta only ever comes from the
/// merged inbox and every replica applies the same amount. Each replica
/// then pushes along its own share of the out-edges, which together count
/// every contribution exactly once. Mass reaching a vertex without
/// out-edges is dropped.
#[derive(Debug, Clone, Copy)]
pub struct PageRank {
    pub alpha: f64,
    /// Activity threshold on `δ`; `None` means `1e-9 / N`.
    pub epsilon: Option<f64>,
}

impl Default for PageRank {
    fn default() -> Self {
        PageRank {
            alpha: 0.85,
            epsilon: None,
        }
    }
}

pub struct PrState {
    value: Vec<f64>,
    delta: Vec<f64>,
    ledger: Vec<f64>,
    queued: Vec<bool>,
    eps: f64,
}

impl Program for PageRank {
    type Value = f64;
    type Agg = Sum;
    type State = PrState;
    type Output = f64;

    fn name(&self) -> &'static str {
        "pr"
    }

    fn aggregator(&self) -> &Sum {
        &Sum
    }

    fn prepare(&self, _subgraphs: &[Subgraph]) -> Result<(), AlgoError> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(AlgoError::Config(format!(
                "damping factor {} outside [0, 1)",
                self.alpha
            )));
        }
        if let Some(e) = self.epsilon {
            if e.is_nan() || e <= 0.0 {
                return Err(AlgoError::Config(format!("tolerance {e} must be positive")));
            }
        }
        Ok(())
    }

    fn init(&self, sg: &Subgraph, job: &JobInfo) -> Result<PrState, AlgoError> {
        let n = sg.num_vertices();
        let total = job.num_vertices.max(1) as f64;
        Ok(PrState {
            value: vec![0.0; n],
            delta: vec![(1.0 - self.alpha) / total; n],
            ledger: vec![0.0; n],
            queued: vec![false; n],
            eps: self.epsilon.unwrap_or(1e-9 / total),
        })
    }

    fn compute(
        &self,
        sg: &Subgraph,
        st: &mut PrState,
        inbox: &[(VertexId, f64)],
        ctx: &mut Context<'_, f64>,
    ) -> Result<(), AlgoError> {
        for &(k, d) in inbox {
            let u = sg
                .local_index(k)
                .ok_or_else(|| AlgoError::Failed(format!("inbox key {k} not local")))?;
            st.delta[u] += d;
        }
        let mut active: Vec<usize> = (0..sg.num_vertices())
            .filter(|&u| st.delta[u] > st.eps)
            .collect();
        for &u in &active {
            st.queued[u] = true;
        }
        let mut next = Vec::new();
        while !active.is_empty() {
            for &u in &active {
                st.queued[u] = false;
                let d = st.delta[u];
                if d <= st.eps {
                    continue;
                }
                st.value[u] += d;
                st.delta[u] = 0.0;
                let out_degree = sg.info(u).out_degree;
                if out_degree == 0 {
                    continue;
                }
                let share = self.alpha * d / out_degree as f64;
                for (w, _) in sg.out_edges(u) {
                    if sg.is_frontier(w) {
                        st.ledger[w] += share;
                    } else {
                        st.delta[w] += share;
                        if st.delta[w] > st.eps && !st.queued[w] {
                            st.queued[w] = true;
                            next.push(w);
                        }
                    }
                }
            }
            std::mem::swap(&mut active, &mut next);
            next.clear();
        }
        let mut emitted = false;
        for u in sg.frontier_locals() {
            let d = std::mem::take(&mut st.ledger[u]);
            if d != 0.0 {
                ctx.add_pair(sg.id_of(u), d);
                emitted = true;
            }
        }
        if !emitted {
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn output(&self, _sg: &Subgraph, st: &PrState, local: usize) -> f64 {
        st.value[local]
    }

    fn outputs_agree(&self, a: &f64, b: &f64) -> bool {
        (a - b).abs() <= 1e-9
    }

    fn format_output(&self, out: &f64) -> String {
        format!("{out:.16e}")
    }
}
