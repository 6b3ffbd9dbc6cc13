//! Subgraph boundary synchronization.
//!
//! Aggregate: every pair `(k, v)` is routed to the partition holding the
//! master replica of `k`, which folds all values submitted for `k` (its own
//! included) in ascending origin order. Disseminate: the merged value is
//! delivered to every replica of `k`, the master's own partition included.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::error::RuntimeError;
use crate::graph::{PartitionId, VertexId};
use crate::runtime::aggregate::Aggregator;
use crate::runtime::exec::{for_each_worker, Execution};
use crate::runtime::transport::{Batch, Transport};
use crate::subgraph::{ReplicaRole, Subgraph};

#[derive(Debug, Clone)]
pub struct Exchange<V> {
    /// Next-superstep inbox per partition, ordered by key.
    pub inboxes: Vec<Batch<V>>,
    pub pairs_sent: Vec<usize>,
    pub pairs_received: Vec<usize>,
    pub network_s: Vec<f64>,
}

fn first_error<T>(results: Vec<Result<T, RuntimeError>>) -> Result<Vec<T>, RuntimeError> {
    results.into_iter().collect()
}

pub fn sbs_exchange<V, A>(
    superstep: u64,
    subgraphs: &[Subgraph],
    outboxes: Vec<Batch<V>>,
    agg: &A,
    transport: &dyn Transport<V>,
    exec: Execution,
) -> Result<Exchange<V>, RuntimeError>
where
    V: Clone + Send + Sync,
    A: Aggregator<V> + ?Sized,
{
    let n = subgraphs.len();
    assert_eq!(outboxes.len(), n, "one outbox per partition");
    assert_eq!(
        transport.num_workers(),
        n,
        "transport sized for the partition count"
    );

    // Aggregate, client side: route each pair to its master.
    let mut slots: Vec<Option<Batch<V>>> = outboxes.into_iter().map(Some).collect();
    let sent = first_error(for_each_worker(exec, &mut slots, |p, slot| {
        let start = Instant::now();
        let outbox = slot.take().unwrap_or_default();
        let sg = &subgraphs[p];
        let mut routed: Vec<Batch<V>> = (0..n).map(|_| Vec::new()).collect();
        let count = outbox.len();
        for (k, v) in outbox {
            let local = sg.local_index(k).ok_or(RuntimeError::Protocol {
                superstep,
                partition: p,
                key: k,
                reason: "emitted a pair for unknown vertex",
            })?;
            let role = &sg.info(local).role;
            if !role.is_frontier() {
                return Err(RuntimeError::Protocol {
                    superstep,
                    partition: p,
                    key: k,
                    reason: "emitted a pair for non-frontier vertex",
                });
            }
            routed[role.master_partition(p)].push((k, v));
        }
        for (to, batch) in routed.into_iter().enumerate() {
            transport.send(p, to, batch)?;
        }
        Ok((count, start.elapsed().as_secs_f64()))
    }))?;

    // Aggregate, server side: merge at the master, then disseminate.
    let mut unit: Vec<()> = vec![(); n];
    let merged = first_error(for_each_worker(exec, &mut unit, |q, _| {
        let start = Instant::now();
        let sg = &subgraphs[q];
        let batches = transport.collect(q, n)?;
        let mut received = 0;
        let mut merged: BTreeMap<VertexId, V> = BTreeMap::new();
        for (_, batch) in batches {
            received += batch.len();
            for (k, v) in batch {
                let is_master = sg
                    .local_index(k)
                    .is_some_and(|l| sg.info(l).role.is_master());
                if !is_master {
                    return Err(RuntimeError::Protocol {
                        superstep,
                        partition: q,
                        key: k,
                        reason: "received an aggregate for non-master",
                    });
                }
                match merged.get_mut(&k) {
                    Some(acc) => *acc = agg.merge(acc, &v),
                    None => {
                        merged.insert(k, v);
                    }
                }
            }
        }
        let mut out: Vec<Batch<V>> = (0..n).map(|_| Vec::new()).collect();
        let mut dis_sent = 0;
        for (k, m) in merged {
            let l = sg.local_index(k).expect("checked above");
            let ReplicaRole::Master { mirrors } = &sg.info(l).role else {
                unreachable!("checked above")
            };
            for &r in mirrors {
                out[r].push((k, m.clone()));
            }
            out[q].push((k, m));
            dis_sent += mirrors.len() + 1;
        }
        for (to, batch) in out.into_iter().enumerate() {
            transport.send(q, to, batch)?;
        }
        Ok((received, dis_sent, start.elapsed().as_secs_f64()))
    }))?;

    // Disseminate, receive side.
    let inboxes = first_error(for_each_worker(exec, &mut unit, |r, _| {
        let start = Instant::now();
        let mut inbox: Batch<V> = transport
            .collect(r, n)?
            .into_iter()
            .flat_map(|(_, b)| b)
            .collect();
        inbox.sort_by_key(|p| p.0);
        Ok((inbox, start.elapsed().as_secs_f64()))
    }))?;

    let mut out = Exchange {
        inboxes: Vec::with_capacity(n),
        pairs_sent: vec![0; n],
        pairs_received: vec![0; n],
        network_s: vec![0.0; n],
    };
    for p in 0..n {
        let (agg_sent, t0) = sent[p];
        let (agg_recv, dis_sent, t1) = merged[p];
        let (ref inbox, t2) = inboxes[p];
        out.pairs_sent[p] = agg_sent + dis_sent;
        out.pairs_received[p] = agg_recv + inbox.len();
        out.network_s[p] = t0 + t1 + t2;
    }
    out.inboxes = inboxes.into_iter().map(|(b, _)| b).collect();
    Ok(out)
}

/// Verifies that every delivered key reached exactly its replica set with
/// one identical value.
pub fn check_inbox_coherence<V: PartialEq + std::fmt::Debug>(
    superstep: u64,
    subgraphs: &[Subgraph],
    inboxes: &[Batch<V>],
) -> Result<(), RuntimeError> {
    let mut seen: BTreeMap<VertexId, (Vec<PartitionId>, &V)> = BTreeMap::new();
    for (p, inbox) in inboxes.iter().enumerate() {
        for (k, v) in inbox {
            let entry = seen.entry(*k).or_insert_with(|| (Vec::new(), v));
            if entry.1 != v {
                return Err(RuntimeError::Incoherent {
                    superstep,
                    vertex: *k,
                    detail: format!(
                        "partition {p} received {v:?}, another replica {:?}",
                        entry.1
                    ),
                });
            }
            entry.0.push(p);
        }
    }
    for (k, (parts, _)) in seen {
        let sg = &subgraphs[parts[0]];
        let role = &sg
            .info(sg.local_index(k).expect("delivered to holder"))
            .role;
        let master = role.master_partition(parts[0]);
        let m_sg = &subgraphs[master];
        let ReplicaRole::Master { mirrors } = &m_sg
            .info(m_sg.local_index(k).expect("master holds key"))
            .role
        else {
            return Err(RuntimeError::Incoherent {
                superstep,
                vertex: k,
                detail: format!("partition {master} is not the master"),
            });
        };
        let mut expected: Vec<PartitionId> = mirrors.clone();
        expected.push(master);
        expected.sort_unstable();
        if parts != expected {
            return Err(RuntimeError::Incoherent {
                superstep,
                vertex: k,
                detail: format!("delivered to {parts:?}, replicas are {expected:?}"),
            });
        }
    }
    Ok(())
}
