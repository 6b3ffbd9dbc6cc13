//! Bulk-synchronous execution of subgraph programs.
//!
//! Each superstep has two phases separated by barriers: every active
//! partition runs [`Program::compute`] on its subgraph and inbox, then the
//! emitted frontier pairs are reconciled through [`sbs::sbs_exchange`]. A
//! partition that voted to halt is skipped until it receives pairs again.
//! The job ends when every partition is halted with an empty inbox.

pub mod aggregate;
pub mod codec;
mod exec;
mod job;
mod pairs;
mod program;
pub mod sbs;
mod stats;
pub mod transport;

pub use aggregate::{Aggregator, MapSum, Min, Sum};
pub use exec::Execution;
pub use job::{run_job, Job, JobConfig, JobResult};
pub use pairs::PairVector;
pub use program::{Context, JobInfo, Program};
pub use sbs::sbs_exchange;
pub use stats::{write_stats_csv, SuperstepStats, WorkerStats, STATS_HEADER};
pub use transport::TransportKind;
