//! The superstep loop.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use log::debug;

use crate::error::{AlgoError, RuntimeError};
use crate::graph::{PartitionId, VertexId};
use crate::runtime::exec::{for_each_worker, Execution};
use crate::runtime::program::{Context, JobInfo, Program};
use crate::runtime::sbs::{check_inbox_coherence, sbs_exchange};
use crate::runtime::stats::{SuperstepStats, WorkerStats};
use crate::runtime::transport::{
    Batch, InProcessTransport, TcpTransport, Transport, TransportKind,
};
use crate::subgraph::Subgraph;

#[derive(Debug, Clone)]
pub struct JobConfig {
    /// Safety cap on compute supersteps; `None` uses `10 * n + 1000`.
    pub max_supersteps: Option<u64>,
    pub execution: Execution,
    pub transport: TransportKind,
    /// Scan replica coherence after every compute phase and every exchange.
    pub check_coherence: bool,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            max_supersteps: None,
            execution: Execution::default(),
            transport: TransportKind::InProcess,
            check_coherence: cfg!(debug_assertions),
        }
    }
}

impl JobConfig {
    pub fn sequential() -> Self {
        JobConfig {
            execution: Execution::Sequential,
            ..Default::default()
        }
    }

    pub fn effective_max_supersteps(&self, n: usize) -> u64 {
        self.max_supersteps.unwrap_or(10 * n as u64 + 1000)
    }
}

#[derive(Debug, Clone)]
pub struct JobResult<O> {
    /// One value per vertex, taken from its master (or only) replica.
    pub values: BTreeMap<VertexId, O>,
    pub stats: Vec<SuperstepStats>,
    /// Compute supersteps executed.
    pub supersteps: u64,
    /// False when the superstep cap stopped the job.
    pub converged: bool,
}

impl<O> JobResult<O> {
    pub fn total_pairs_sent(&self) -> usize {
        self.stats.iter().map(SuperstepStats::pairs_sent).sum()
    }
}

struct Worker<S, V> {
    state: S,
    inbox: Batch<V>,
    halted: bool,
}

fn validate(subgraphs: &[Subgraph]) -> Result<(), RuntimeError> {
    if subgraphs.is_empty() {
        return Err(RuntimeError::Config("no partitions to run".into()));
    }
    let n = subgraphs.len();
    for (i, sg) in subgraphs.iter().enumerate() {
        if sg.partition() != i || sg.num_partitions() != n {
            return Err(RuntimeError::Config(format!(
                "subgraph at position {i} is partition {} of {}, expected {i} of {n}",
                sg.partition(),
                sg.num_partitions()
            )));
        }
    }
    Ok(())
}

/// A job that can be advanced one superstep at a time, for tracing and
/// tests. [`run_job`] drives it to completion.
pub struct Job<'a, P: Program> {
    program: &'a P,
    subgraphs: &'a [Subgraph],
    cfg: JobConfig,
    transport: Box<dyn Transport<P::Value>>,
    info: JobInfo,
    workers: Vec<Worker<P::State, P::Value>>,
    stats: Vec<SuperstepStats>,
    superstep: u64,
    finished: bool,
}

impl<'a, P: Program> Job<'a, P> {
    /// Validates the inputs and initializes every partition's state.
    /// `subgraphs` must be ordered by partition id.
    pub fn new(
        program: &'a P,
        subgraphs: &'a [Subgraph],
        cfg: &JobConfig,
    ) -> Result<Self, RuntimeError> {
        validate(subgraphs)?;
        let n = subgraphs.len();
        program.prepare(subgraphs).map_err(|source| match source {
            AlgoError::Config(msg) => RuntimeError::Config(msg),
            other => RuntimeError::Config(other.to_string()),
        })?;
        let transport: Box<dyn Transport<P::Value>> = match cfg.transport {
            TransportKind::InProcess => Box::new(InProcessTransport::new(n)),
            TransportKind::Tcp => Box::new(TcpTransport::new(n)?),
        };
        let mut distinct: Vec<VertexId> = subgraphs
            .iter()
            .flat_map(|sg| sg.vertex_infos().iter().map(|v| v.id))
            .collect();
        distinct.sort_unstable();
        distinct.dedup();
        let info = JobInfo {
            num_partitions: n,
            num_vertices: distinct.len(),
        };
        let mut workers = Vec::with_capacity(n);
        for sg in subgraphs {
            let state = program
                .init(sg, &info)
                .map_err(|source| RuntimeError::Algorithm {
                    partition: sg.partition(),
                    superstep: 0,
                    source,
                })?;
            workers.push(Worker {
                state,
                inbox: Vec::new(),
                halted: false,
            });
        }
        Ok(Job {
            program,
            subgraphs,
            cfg: cfg.clone(),
            transport,
            info,
            workers,
            stats: Vec::new(),
            superstep: 0,
            finished: false,
        })
    }

    /// Number of compute supersteps executed so far.
    pub fn superstep(&self) -> u64 {
        self.superstep
    }

    pub fn info(&self) -> &JobInfo {
        &self.info
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn stats(&self) -> &[SuperstepStats] {
        &self.stats
    }

    /// Merged pairs waiting for partition `p`'s next compute phase.
    pub fn inbox(&self, p: PartitionId) -> &[(VertexId, P::Value)] {
        &self.workers[p].inbox
    }

    /// The current output of every replica of `v`, by partition.
    pub fn replica_outputs(&self, v: VertexId) -> Vec<(PartitionId, P::Output)> {
        self.subgraphs
            .iter()
            .zip(&self.workers)
            .filter_map(|(sg, w)| {
                sg.local_index(v)
                    .map(|l| (sg.partition(), self.program.output(sg, &w.state, l)))
            })
            .collect()
    }

    /// Runs one compute phase and one exchange. Returns true once every
    /// partition has halted with an empty inbox.
    pub fn step(&mut self) -> Result<bool, RuntimeError> {
        if self.finished {
            return Ok(true);
        }
        let (program, subgraphs, info) = (self.program, self.subgraphs, &self.info);
        let n = subgraphs.len();
        let superstep = self.superstep;
        let exec = self.cfg.execution;
        let phase = Instant::now();
        let outcomes = for_each_worker(exec, &mut self.workers, |p, w| {
            if w.halted && w.inbox.is_empty() {
                return Ok((Vec::new(), 0.0));
            }
            let start = Instant::now();
            let inbox = std::mem::take(&mut w.inbox);
            let mut ctx = Context::new(superstep, info, program.aggregator());
            program
                .compute(&subgraphs[p], &mut w.state, &inbox, &mut ctx)
                .map_err(|source| RuntimeError::Algorithm {
                    partition: p,
                    superstep,
                    source,
                })?;
            let (out, halted) = ctx.finish();
            w.halted = halted;
            Ok((out.into_sorted(), start.elapsed().as_secs_f64()))
        });
        let compute_wall = phase.elapsed().as_secs_f64();
        let mut outboxes = Vec::with_capacity(n);
        let mut compute_s = Vec::with_capacity(n);
        for r in outcomes {
            let (out, t) = r?;
            outboxes.push(out);
            compute_s.push(t);
        }

        if self.cfg.check_coherence {
            check_replicas(
                program,
                subgraphs,
                &self.workers,
                superstep,
                Program::synced_output,
            )?;
        }

        let emitted: usize = outboxes.iter().map(Vec::len).sum();
        let sbs_start = Instant::now();
        let ex = sbs_exchange(
            superstep,
            subgraphs,
            outboxes,
            program.aggregator(),
            self.transport.as_ref(),
            exec,
        )?;
        let sbs_wall = sbs_start.elapsed().as_secs_f64();
        if self.cfg.check_coherence {
            check_inbox_coherence(superstep, subgraphs, &ex.inboxes)?;
        }
        let sent: usize = ex.pairs_sent.iter().sum();
        let received: usize = ex.pairs_received.iter().sum();
        if sent != received {
            return Err(RuntimeError::Incoherent {
                superstep,
                vertex: 0,
                detail: format!("{sent} pairs sent but {received} received"),
            });
        }

        self.stats.push(SuperstepStats {
            superstep,
            workers: (0..n)
                .map(|p| WorkerStats {
                    worker: p,
                    compute_s: compute_s[p],
                    network_s: ex.network_s[p],
                    sync_s: (compute_wall - compute_s[p]).max(0.0)
                        + (sbs_wall - ex.network_s[p]).max(0.0),
                    pairs_sent: ex.pairs_sent[p],
                    pairs_received: ex.pairs_received[p],
                })
                .collect(),
        });
        debug!("superstep {superstep}: {emitted} pairs emitted, {sent} routed");

        let mut all_done = true;
        for (w, inbox) in self.workers.iter_mut().zip(ex.inboxes) {
            all_done &= w.halted && inbox.is_empty();
            w.inbox = inbox;
        }
        self.superstep += 1;
        self.finished = all_done;
        Ok(all_done)
    }

    /// Collects one value per vertex from its master (or only) replica.
    pub fn finish(self) -> Result<JobResult<P::Output>, RuntimeError> {
        let (program, subgraphs) = (self.program, self.subgraphs);
        if self.cfg.check_coherence && self.finished {
            check_replicas(
                program,
                subgraphs,
                &self.workers,
                self.superstep,
                Program::output,
            )?;
        }
        let mut values = BTreeMap::new();
        for (sg, w) in subgraphs.iter().zip(&self.workers) {
            for (local, info) in sg.vertex_infos().iter().enumerate() {
                if !info.role.is_frontier() || info.role.is_master() {
                    values.insert(info.id, program.output(sg, &w.state, local));
                }
            }
        }
        Ok(JobResult {
            values,
            stats: self.stats,
            supersteps: self.superstep,
            converged: self.finished,
        })
    }
}

/// Runs `program` to termination over `subgraphs`, which must be ordered
/// by partition id.
pub fn run_job<P: Program>(
    program: &P,
    subgraphs: &[Subgraph],
    cfg: &JobConfig,
) -> Result<JobResult<P::Output>, RuntimeError> {
    let mut job = Job::new(program, subgraphs, cfg)?;
    let max = cfg.effective_max_supersteps(subgraphs.len());
    while job.superstep() < max && !job.step()? {}
    job.finish()
}

type OutputFn<P> = fn(&P, &Subgraph, &<P as Program>::State, usize) -> <P as Program>::Output;

/// Compares the chosen view of every frontier vertex across its replicas.
fn check_replicas<P: Program>(
    program: &P,
    subgraphs: &[Subgraph],
    workers: &[Worker<P::State, P::Value>],
    superstep: u64,
    view: OutputFn<P>,
) -> Result<(), RuntimeError> {
    let mut first: HashMap<VertexId, (PartitionId, P::Output)> = HashMap::new();
    for (sg, w) in subgraphs.iter().zip(workers) {
        for local in sg.frontier_locals() {
            let id = sg.id_of(local);
            let value = view(program, sg, &w.state, local);
            match first.get(&id) {
                None => {
                    first.insert(id, (sg.partition(), value));
                }
                Some((p, seen)) => {
                    if !program.outputs_agree(seen, &value) {
                        return Err(RuntimeError::Incoherent {
                            superstep,
                            vertex: id,
                            detail: format!(
                                "partition {p} holds {seen:?}, partition {} holds {value:?}",
                                sg.partition()
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}
