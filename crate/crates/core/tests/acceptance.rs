//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use vcgraph::algo::{ConnectedComponents, GraphSimulation, PageRank, ShortestPaths};
use vcgraph::io::{kronecker_generate, EdgeListSpec, KroneckerParams};
use vcgraph::partition::compute_metrics;
use vcgraph::pipeline::{self, AlgoSpec, Assignment, PartitionOptions, RunOptions};
use vcgraph::runtime::sbs::{check_inbox_coherence, sbs_exchange};
use vcgraph::runtime::transport::InProcessTransport;
use vcgraph::runtime::{run_job, Execution, Job, JobConfig, JobResult, Program, Sum};
use vcgraph::{Method, RuntimeError, Subgraph, VertexId};

type Check = Result<String, String>;
/// result.tsv, metrics.json, and the stats pair-count columns.
type Criterion = (&'static str, fn() -> Check);
type Artifacts = (Vec<u8>, Vec<u8>, Vec<String>);

static SUPERSTEPS_SCANNED: AtomicUsize = AtomicUsize::new(0);
static PROTOCOL_FAILURES: AtomicUsize = AtomicUsize::new(0);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget_s: u64) -> Result<f64, String> {
    let t = start.elapsed().as_secs_f64();
    ensure(t < budget_s as f64, || {
        format!("took {t:.1}s, budget {budget_s}s")
    })?;
    Ok(t)
}

/// Runs with the coherence scan on and tallies protocol checks for
/// criterion 7.
fn run<P: Program>(
    p: &P,
    sgs: &[Subgraph],
    exec: Execution,
) -> Result<JobResult<P::Output>, String> {
    match run_job(p, sgs, &checked(exec)) {
        Ok(r) => {
            for s in &r.stats {
                SUPERSTEPS_SCANNED.fetch_add(1, Ordering::Relaxed);
                if s.pairs_sent() != s.pairs_received() {
                    PROTOCOL_FAILURES.fetch_add(1, Ordering::Relaxed);
                    return Err(format!("superstep {}: pairs not conserved", s.superstep));
                }
            }
            ensure(r.converged, || format!("{} did not converge", p.name()))?;
            Ok(r)
        }
        Err(e) => {
            if matches!(
                e,
                RuntimeError::Incoherent { .. } | RuntimeError::Protocol { .. }
            ) {
                PROTOCOL_FAILURES.fetch_add(1, Ordering::Relaxed);
            }
            Err(format!("{} failed: {e}", p.name()))
        }
    }
}

fn method_for(i: u64) -> Method {
    if i.is_multiple_of(2) {
        Method::CanonicalDegreeHash
    } else {
        Method::RandomHash
    }
}

fn cc_oracle() -> Check {
    let start = Instant::now();
    let mut runs = 0;
    for i in 0..20u64 {
        let scale = 10 + (i % 3) as u32;
        let g = kronecker_generate(&KroneckerParams::new(scale, 16, 100 + i)).unwrap();
        let expected = union_find_cc(&g);
        for n in [1, 2, 4, 8] {
            let sgs = split(&g, n, method_for(i), i);
            let r = run(&ConnectedComponents, &sgs, Execution::default())?;
            ensure(r.values == expected, || {
                format!("graph {i} (scale {scale}), n={n}: labels differ")
            })?;
            runs += 1;
        }
    }
    let t = within(start, 60)?;
    Ok(format!("{runs} runs equal union-find in {t:.1}s"))
}

fn sssp_oracle() -> Check {
    let start = Instant::now();
    let mut runs = 0;
    let mut unreachable = 0;
    for i in 0..20u64 {
        let g = random_weighted(1000, 3000, 200 + i);
        let source = i * 37 % 1000;
        let expected = dijkstra(&g, source);
        unreachable += expected.values().filter(|d| d.is_none()).count();
        for n in [1, 2, 4, 8] {
            let sgs = split(&g, n, method_for(i), i);
            let r = run(&ShortestPaths::new(source), &sgs, Execution::default())?;
            ensure(r.values == expected, || {
                format!("graph {i}, n={n}: distances differ")
            })?;
            runs += 1;
        }
    }
    let t = within(start, 30)?;
    Ok(format!(
        "{runs} runs equal Dijkstra exactly ({unreachable} unreachable vertices across graphs) in {t:.1}s"
    ))
}

fn pr_oracle() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..10u64 {
        let g = kronecker_generate(&KroneckerParams::new(10, 16, 300 + i)).unwrap();
        let expected = jacobi_pagerank(&g, 0.85, 200);
        for n in [1, 4] {
            let sgs = split(&g, n, method_for(i), i);
            let r = run(&PageRank::default(), &sgs, Execution::default())?;
            let d = linf(&r.values, &expected);
            ensure(d <= 1e-8, || {
                format!("graph {i}, n={n}: L-inf {d:e} > 1e-8")
            })?;
            worst = worst.max(d);
        }
    }
    let t = within(start, 60)?;
    Ok(format!(
        "20 runs, worst L-inf {worst:.2e} vs Jacobi in {t:.1}s"
    ))
}

fn gsim_oracle() -> Check {
    let start = Instant::now();
    let mut nonempty = 0;
    for i in 0..50u64 {
        let g = random_labeled(100, 150 + 4 * i as usize, 400 + i);
        let q = random_pattern(500 + i);
        let expected = naive_simulation(&g, &q);
        if expected.values().all(|s| !s.is_empty()) {
            nonempty += 1;
        }
        let algo = GraphSimulation::new(q);
        for n in [1, 2, 4] {
            let sgs = split(&g, n, method_for(i), i);
            let r = run(&algo, &sgs, Execution::default())?;
            ensure(algo.sim_sets(&r.values) == expected, || {
                format!("graph {i}, n={n}: sim sets differ")
            })?;
        }
    }
    let t = within(start, 60)?;
    Ok(format!(
        "150 runs equal the naive fixpoint ({nonempty}/50 cases with every pattern vertex matched) in {t:.1}s"
    ))
}

fn partition_metrics() -> Check {
    let start = Instant::now();
    let g = kronecker_generate(&KroneckerParams::new(16, 16, 1)).unwrap();
    let rh = compute_metrics(&split(&g, 32, Method::RandomHash, 1));
    let cdbh = compute_metrics(&split(&g, 32, Method::CanonicalDegreeHash, 1));
    ensure(rh.imbalance <= 1.1, || {
        format!("RH imbalance {}", rh.imbalance)
    })?;
    ensure(cdbh.imbalance <= 1.1, || {
        format!("CDBH imbalance {}", cdbh.imbalance)
    })?;
    ensure(cdbh.replication_factor <= rh.replication_factor, || {
        format!(
            "RF CDBH {} > RH {}",
            cdbh.replication_factor, rh.replication_factor
        )
    })?;
    let t = within(start, 120)?;
    Ok(format!(
        "imbalance RH {:.4} CDBH {:.4}; RF RH {:.4} >= CDBH {:.4} ({t:.1}s)",
        rh.imbalance, cdbh.imbalance, rh.replication_factor, cdbh.replication_factor
    ))
}

fn communication() -> Check {
    let g = kronecker_generate(&KroneckerParams::new(14, 16, 1)).unwrap();
    let mut out = Vec::new();
    for m in [Method::RandomHash, Method::CanonicalDegreeHash] {
        let r = run(
            &ConnectedComponents,
            &split(&g, 8, m, 1),
            Execution::default(),
        )?;
        out.push((r.total_pairs_sent(), r.supersteps));
    }
    let ((rh_pairs, rh_steps), (cd_pairs, cd_steps)) = (out[0], out[1]);
    ensure(cd_pairs <= rh_pairs, || {
        format!("pairs CDBH {cd_pairs} > RH {rh_pairs}")
    })?;
    ensure(cd_steps <= rh_steps, || {
        format!("supersteps CDBH {cd_steps} > RH {rh_steps}")
    })?;
    Ok(format!(
        "pairs sent RH {rh_pairs} >= CDBH {cd_pairs}; supersteps RH {rh_steps} >= CDBH {cd_steps}"
    ))
}

fn pair_counts<O>(r: &JobResult<O>) -> Vec<(usize, usize)> {
    r.stats
        .iter()
        .flat_map(|s| s.workers.iter().map(|w| (w.pairs_sent, w.pairs_received)))
        .collect()
}

fn protocol_invariants() -> Check {
    let scanned = SUPERSTEPS_SCANNED.load(Ordering::Relaxed);
    let failures = PROTOCOL_FAILURES.load(Ordering::Relaxed);
    ensure(scanned > 0, || "criteria 1-4 recorded no supersteps".into())?;
    ensure(failures == 0, || {
        format!("{failures} coherence or conservation failures in criteria 1-4")
    })?;

    // Exchange alone: random outboxes, one thread vs one thread per worker.
    let g = kronecker_generate(&KroneckerParams::new(10, 16, 7)).unwrap();
    let sgs = split(&g, 4, Method::CanonicalDegreeHash, 7);
    let mut rng = StdRng::seed_from_u64(9);
    let outboxes: Vec<Vec<(VertexId, f64)>> = sgs
        .iter()
        .map(|sg| {
            sg.frontier_vertices()
                .filter(|_| rng.gen_bool(0.5))
                .map(|v| v.id())
                .collect::<Vec<_>>()
                .into_iter()
                .map(|k| (k, rng.gen_range(0.0..1.0)))
                .collect()
        })
        .collect();
    let seq = sbs_exchange(
        0,
        &sgs,
        outboxes.clone(),
        &Sum,
        &InProcessTransport::new(4),
        Execution::Sequential,
    )
    .map_err(|e| e.to_string())?;
    let par = sbs_exchange(
        0,
        &sgs,
        outboxes,
        &Sum,
        &InProcessTransport::new(4),
        Execution::Parallel { threads: 4 },
    )
    .map_err(|e| e.to_string())?;
    ensure(seq.inboxes == par.inboxes, || {
        "exchange results depend on scheduling".into()
    })?;
    ensure(
        seq.pairs_sent == par.pairs_sent && seq.pairs_received == par.pairs_received,
        || "exchange pair counts depend on scheduling".into(),
    )?;
    // Every replica receiving a key must hold the master's single merged value.
    check_inbox_coherence(0, &sgs, &seq.inboxes).map_err(|e| e.to_string())?;

    // Whole jobs: single-threaded reference vs parallel.
    let cc_s = run(&ConnectedComponents, &sgs, Execution::Sequential)?;
    let cc_p = run(
        &ConnectedComponents,
        &sgs,
        Execution::Parallel { threads: 4 },
    )?;
    ensure(
        cc_s.values == cc_p.values && pair_counts(&cc_s) == pair_counts(&cc_p),
        || "CC differs between sequential and parallel runs".into(),
    )?;
    let pr_s = run(&PageRank::default(), &sgs, Execution::Sequential)?;
    let pr_p = run(
        &PageRank::default(),
        &sgs,
        Execution::Parallel { threads: 3 },
    )?;
    ensure(
        pr_s.values == pr_p.values && pair_counts(&pr_s) == pair_counts(&pr_p),
        || "PageRank differs between sequential and parallel runs".into(),
    )?;
    Ok(format!(
        "{scanned} supersteps scanned in criteria 1-4 with no violation; sequential and parallel runs identical"
    ))
}

fn determinism() -> Check {
    let pipeline_once = |root: &std::path::Path| -> Result<Artifacts, String> {
        let edges = root.join("edges.txt");
        let parts = root.join("parts");
        let result = root.join("result.tsv");
        let stats = root.join("stats.csv");
        pipeline::generate_file(&KroneckerParams::new(11, 16, 42), &edges)
            .map_err(|e| e.to_string())?;
        pipeline::partition_files(&PartitionOptions {
            input: edges,
            labels: None,
            spec: EdgeListSpec::default(),
            num_partitions: 4,
            assignment: Assignment::Hash(Method::CanonicalDegreeHash),
            seed: 42,
            out_dir: parts.clone(),
        })
        .map_err(|e| e.to_string())?;
        pipeline::run_files(&RunOptions {
            dir: parts.clone(),
            algo: AlgoSpec::Pr {
                alpha: 0.85,
                epsilon: None,
            },
            job: checked(Execution::default()),
            output: result.clone(),
            stats: Some(stats.clone()),
        })
        .map_err(|e| e.to_string())?;
        let read = |p: &std::path::Path| std::fs::read(p).map_err(|e| e.to_string());
        let counts = String::from_utf8(read(&stats)?)
            .unwrap()
            .lines()
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                format!("{},{},{},{}", f[0], f[1], f[5], f[6])
            })
            .collect();
        Ok((read(&result)?, read(&parts.join("metrics.json"))?, counts))
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let x = pipeline_once(a.path())?;
    let y = pipeline_once(b.path())?;
    ensure(x.0 == y.0, || "result.tsv differs".into())?;
    ensure(x.1 == y.1, || "metrics.json differs".into())?;
    ensure(x.2 == y.2, || "stats pair counts differ".into())?;
    Ok(format!(
        "two runs byte-identical ({} result bytes, {} stats rows)",
        x.0.len(),
        x.2.len() - 1
    ))
}

fn golden_trace() -> Check {
    let (_, sgs) = golden_example();
    let labels_in = |job: &Job<'_, ConnectedComponents>, p: usize| -> BTreeSet<VertexId> {
        sgs[p]
            .vertex_infos()
            .iter()
            .map(|v| {
                job.replica_outputs(v.id)
                    .into_iter()
                    .find(|(q, _)| *q == p)
                    .unwrap()
                    .1
            })
            .collect()
    };
    let cfg = JobConfig {
        check_coherence: true,
        ..JobConfig::sequential()
    };
    let mut job = Job::new(&ConnectedComponents, &sgs, &cfg).map_err(|e| e.to_string())?;
    let done = job.step().map_err(|e| e.to_string())?;
    ensure(!done, || "finished after one superstep".into())?;
    let local: Vec<BTreeSet<VertexId>> = (0..3).map(|p| labels_in(&job, p)).collect();
    ensure(
        local
            == [
                BTreeSet::from([0]),
                BTreeSet::from([1]),
                BTreeSet::from([2]),
            ],
        || format!("local labels after superstep 0: {local:?}"),
    )?;
    // D=3 and G=6 merged to A=0 at their master (partition 1) and sent to every replica.
    ensure(job.inbox(1) == [(3, 0), (6, 0)], || {
        format!("master inbox {:?}", job.inbox(1))
    })?;
    ensure(job.inbox(0) == [(3, 0), (6, 0)], || {
        format!("partition 0 inbox {:?}", job.inbox(0))
    })?;
    ensure(job.inbox(2) == [(6, 0)], || {
        format!("partition 2 inbox {:?}", job.inbox(2))
    })?;
    while !job.step().map_err(|e| e.to_string())? {
        ensure(job.superstep() < 10, || "no termination".into())?;
    }
    let r = job.finish().map_err(|e| e.to_string())?;
    ensure(r.supersteps == 2, || {
        format!("{} compute supersteps", r.supersteps)
    })?;
    let expected: BTreeMap<VertexId, VertexId> = (0..7).map(|v| (v, 0)).collect();
    ensure(r.values == expected, || {
        format!("final labels {:?}", r.values)
    })?;
    Ok("local labels {A},{B},{C}; D,G merged to A; all A after 2 compute supersteps".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("CC equals union-find", cc_oracle),
        ("SSSP equals Dijkstra", sssp_oracle),
        ("PageRank within 1e-8 of Jacobi", pr_oracle),
        ("graph simulation equals naive fixpoint", gsim_oracle),
        ("partition balance and replication", partition_metrics),
        ("CC communication under CDBH vs RH", communication),
        (
            "coherence, conservation, scheduling independence",
            protocol_invariants,
        ),
        ("pipeline determinism", determinism),
        ("7-vertex golden CC trace", golden_trace),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
