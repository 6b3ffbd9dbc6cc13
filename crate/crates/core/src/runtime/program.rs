use std::fmt::Debug;

use crate::error::AlgoError;
use crate::graph::VertexId;
use crate::runtime::aggregate::Aggregator;
use crate::runtime::codec::WireValue;
use crate::runtime::pairs::PairVector;
use crate::subgraph::Subgraph;

/// Job-wide facts visible to every worker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JobInfo {
    pub num_partitions: usize,
    /// Distinct vertices across all partitions.
    pub num_vertices: usize,
}

/// Per-call handle given to [`Program::compute`]: the superstep number, the
/// outgoing pair vector and the halt vote.
pub struct Context<'a, V> {
    superstep: u64,
    job: &'a JobInfo,
    agg: &'a dyn Aggregator<V>,
    out: PairVector<V>,
    halted: bool,
}

impl<'a, V: Clone> Context<'a, V> {
    pub(crate) fn new(superstep: u64, job: &'a JobInfo, agg: &'a dyn Aggregator<V>) -> Self {
        Context {
            superstep,
            job,
            agg,
            out: PairVector::new(),
            halted: false,
        }
    }

    pub fn superstep(&self) -> u64 {
        self.superstep
    }

    pub fn job(&self) -> &JobInfo {
        self.job
    }

    /// Queues `(key, value)` for boundary synchronization. Keys must be
    /// frontier vertices of the calling partition.
    pub fn add_pair(&mut self, key: VertexId, value: V) {
        self.out.add(key, value, self.agg);
    }

    pub fn vote_to_halt(&mut self) {
        self.halted = true;
    }

    pub(crate) fn finish(self) -> (PairVector<V>, bool) {
        (self.out, self.halted)
    }
}

/// A subgraph-centric program: one `compute` call per active partition per
/// superstep, with frontier updates reconciled by the runtime between
/// supersteps using [`Program::aggregator`].
pub trait Program: Sync {
    type Value: Clone + Send + Sync + Debug + PartialEq + WireValue + 'static;
    type Agg: Aggregator<Self::Value>;
    type State: Send;
    type Output: Clone + Send + Debug;

    fn name(&self) -> &'static str;

    fn aggregator(&self) -> &Self::Agg;

    /// Job-level validation against the whole partition set, run once
    /// before superstep 0.
    fn prepare(&self, _subgraphs: &[Subgraph]) -> Result<(), AlgoError> {
        Ok(())
    }

    fn init(&self, sg: &Subgraph, job: &JobInfo) -> Result<Self::State, AlgoError>;

    /// `inbox` holds the merged values for this partition's frontier
    /// vertices, ordered by key.
    fn compute(
        &self,
        sg: &Subgraph,
        state: &mut Self::State,
        inbox: &[(VertexId, Self::Value)],
        ctx: &mut Context<'_, Self::Value>,
    ) -> Result<(), AlgoError>;

    /// Final value of the replica at local ordinal `local`.
    fn output(&self, sg: &Subgraph, state: &Self::State, local: usize) -> Self::Output;

    /// Value all replicas of a frontier vertex must agree on at the end of
    /// every compute phase.
    fn synced_output(&self, sg: &Subgraph, state: &Self::State, local: usize) -> Self::Output {
        self.output(sg, state, local)
    }

    fn outputs_agree(&self, a: &Self::Output, b: &Self::Output) -> bool;

    /// Text rendering used in result files.
    fn format_output(&self, out: &Self::Output) -> String;
}
