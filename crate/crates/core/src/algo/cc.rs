use crate::error::AlgoError;
use crate::graph::VertexId;
use crate::runtime::{Context, JobInfo, Min, Program};
use crate::subgraph::Subgraph;

/// Weakly connected components by minimum-id label propagation. Each
/// partition labels its local components with a traversal, then only the
/// labels of frontier vertices travel between partitions.
///
/// Edges are followed in both directions, so a directed input is treated
/// as its symmetrized closure.
#[derive(Debug, Default, Clone, Copy)]
pub struct ConnectedComponents;

pub struct CcState {
    label: Vec<VertexId>,
    /// Last label agreed on by every replica; frontier only.
    synced: Vec<VertexId>,
    stack: Vec<usize>,
}

impl CcState {
    fn spread(&mut self, sg: &Subgraph) {
        while let Some(u) = self.stack.pop() {
            let l = self.label[u];
            for (w, _) in sg.out_edges(u).chain(sg.in_edges(u)) {
                if self.label[w] > l {
                    self.label[w] = l;
                    self.stack.push(w);
                }
            }
        }
    }
}

impl Program for ConnectedComponents {
    type Value = u64;
    type Agg = Min;
    type State = CcState;
    type Output = VertexId;

    fn name(&self) -> &'static str {
        "cc"
    }

    fn aggregator(&self) -> &Min {
        &Min
    }

    fn init(&self, sg: &Subgraph, _job: &JobInfo) -> Result<CcState, AlgoError> {
        let label: Vec<VertexId> = sg.vertex_infos().iter().map(|v| v.id).collect();
        Ok(CcState {
            synced: label.clone(),
            label,
            stack: Vec::new(),
        })
    }

    fn compute(
        &self,
        sg: &Subgraph,
        st: &mut CcState,
        inbox: &[(VertexId, u64)],
        ctx: &mut Context<'_, u64>,
    ) -> Result<(), AlgoError> {
        if ctx.superstep() == 0 {
            // Locals are ordered by id, so every vertex is a seed of
            // its own component only if nothing smaller reached it.
            for u in 0..sg.num_vertices() {
                if st.label[u] == sg.id_of(u) {
                    st.stack.push(u);
                    st.spread(sg);
                }
            }
        }
        for &(k, l) in inbox {
            let u = sg
                .local_index(k)
                .ok_or_else(|| AlgoError::Failed(format!("inbox key {k} not local")))?;
            st.synced[u] = l;
            if l < st.label[u] {
                st.label[u] = l;
                st.stack.push(u);
            }
        }
        st.spread(sg);
        let mut emitted = false;
        for u in sg.frontier_locals() {
            if st.label[u] < st.synced[u] {
                ctx.add_pair(sg.id_of(u), st.label[u]);
                emitted = true;
            }
        }
        if !emitted {
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn output(&self, _sg: &Subgraph, st: &CcState, local: usize) -> VertexId {
        st.label[local]
    }

    fn synced_output(&self, _sg: &Subgraph, st: &CcState, local: usize) -> VertexId {
        st.synced[local]
    }

    fn outputs_agree(&self, a: &VertexId, b: &VertexId) -> bool {
        a == b
    }

    fn format_output(&self, out: &VertexId) -> String {
        out.to_string()
    }
}
