use std::io::{self, Write};

use serde::Serialize;

use crate::graph::PartitionId;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct WorkerStats {
    pub worker: PartitionId,
    pub compute_s: f64,
    pub network_s: f64,
    pub sync_s: f64,
    pub pairs_sent: usize,
    pub pairs_received: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuperstepStats {
    pub superstep: u64,
    pub workers: Vec<WorkerStats>,
}

impl SuperstepStats {
    pub fn pairs_sent(&self) -> usize {
        self.workers.iter().map(|w| w.pairs_sent).sum()
    }

    pub fn pairs_received(&self) -> usize {
        self.workers.iter().map(|w| w.pairs_received).sum()
    }
}

pub const STATS_HEADER: &str =
    "superstep,worker,compute_s,network_s,sync_s,pairs_sent,pairs_received";

/// One row per (superstep, worker).
pub fn write_stats_csv<W: Write>(w: &mut W, stats: &[SuperstepStats]) -> io::Result<()> {
    writeln!(w, "{STATS_HEADER}")?;
    for s in stats {
        for ws in &s.workers {
            writeln!(
                w,
                "{},{},{:.9},{:.9},{:.9},{},{}",
                s.superstep,
                ws.worker,
                ws.compute_s,
                ws.network_s,
                ws.sync_s,
                ws.pairs_sent,
                ws.pairs_received
            )?;
        }
    }
    Ok(())
}
