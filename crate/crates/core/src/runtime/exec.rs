/// How logical workers (one per partition) are mapped onto OS threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    /// All workers multiplexed on the calling thread, in partition order.
    Sequential,
    /// Worker `p` runs on thread `p % threads`.
    Parallel { threads: usize },
}

impl Default for Execution {
    fn default() -> Self {
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        Execution::Parallel { threads }
    }
}

/// Runs `f` once per slot and returns the results in slot order. The call
/// returns only after every worker finished, which is the phase barrier.
pub(crate) fn for_each_worker<S, T, F>(exec: Execution, slots: &mut [S], f: F) -> Vec<T>
where
    S: Send,
    T: Send,
    F: Fn(usize, &mut S) -> T + Sync,
{
    let threads = match exec {
        Execution::Sequential => 1,
        Execution::Parallel { threads } => threads.clamp(1, slots.len().max(1)),
    };
    if threads == 1 {
        return slots.iter_mut().enumerate().map(|(i, s)| f(i, s)).collect();
    }
    let mut buckets: Vec<Vec<(usize, &mut S)>> = (0..threads).map(|_| Vec::new()).collect();
    for (i, s) in slots.iter_mut().enumerate() {
        buckets[i % threads].push((i, s));
    }
    let f = &f;
    let mut results: Vec<(usize, T)> = std::thread::scope(|scope| {
        let handles: Vec<_> = buckets
            .into_iter()
            .map(|bucket| {
                scope.spawn(move || {
                    bucket
                        .into_iter()
                        .map(|(i, s)| (i, f(i, s)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread panicked"))
            .collect()
    });
    results.sort_by_key(|r| r.0);
    results.into_iter().map(|r| r.1).collect()
}
