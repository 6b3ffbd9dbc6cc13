use std::path::Path;
use std::process::{Command, Output};

fn vcgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn end_to_end_cc() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    let parts = dir.path().join("parts");
    let result = dir.path().join("result.tsv");
    let stats = dir.path().join("stats.csv");
    assert_eq!(
        code(&vcgraph(&[
            "gen",
            "--scale",
            "8",
            "--edgefactor",
            "4",
            "--seed",
            "3",
            "-o",
            s(&edges)
        ])),
        0
    );
    let o = vcgraph(&[
        "partition",
        "-i",
        s(&edges),
        "-n",
        "4",
        "--method",
        "cdbh",
        "--seed",
        "1",
        "-o",
        s(&parts),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(parts.join("part-3-of-4.sg").exists());
    assert!(parts.join("metrics.json").exists());
    let o = vcgraph(&[
        "run",
        "--algo",
        "cc",
        "-d",
        s(&parts),
        "--stats",
        s(&stats),
        "-o",
        s(&result),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&result).unwrap();
    let ids: Vec<u64> = text
        .lines()
        .map(|l| l.split('\t').next().unwrap().parse().unwrap())
        .collect();
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
    let csv = std::fs::read_to_string(&stats).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "superstep,worker,compute_s,network_s,sync_s,pairs_sent,pairs_received"
    );
}

#[test]
fn metrics_of_single_partition() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.txt");
    let parts = dir.path().join("p");
    std::fs::write(&edges, "1 2\n2 3\n").unwrap();
    assert_eq!(
        code(&vcgraph(&[
            "partition",
            "-i",
            s(&edges),
            "-n",
            "1",
            "-o",
            s(&parts)
        ])),
        0
    );
    let o = vcgraph(&["metrics", "-d", s(&parts)]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        String::from_utf8_lossy(&o.stdout),
        "imbalance 1.0\nreplicationFactor 1.0\n"
    );
}

#[test]
fn forced_plan_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.txt");
    let plan = dir.path().join("plan.txt");
    let parts = dir.path().join("p");
    std::fs::write(&edges, "0 1\n0 3\n0 5\n0 2\n2 4\n4 5\n").unwrap();
    std::fs::write(&plan, "0 1 0\n0 3 0\n0 5 1\n0 2 1\n2 4 1\n4 5 1\n").unwrap();
    let o = vcgraph(&[
        "partition",
        "-i",
        s(&edges),
        "-n",
        "2",
        "--plan",
        s(&plan),
        "-o",
        s(&parts),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let json: String = std::fs::read_to_string(parts.join("metrics.json")).unwrap();
    assert!(json.contains("\"imbalance\": 1.3333333333333333"), "{json}");
    assert!(
        json.contains("\"replicationFactor\": 1.1666666666666667"),
        "{json}"
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&vcgraph(&["gen", "--bogus"])), 1);
    assert_eq!(code(&vcgraph(&["--help"])), 0);

    let edges = dir.path().join("e.txt");
    let parts = dir.path().join("p");
    let out = dir.path().join("r.tsv");
    std::fs::write(&edges, "1 2\n2 3\n3 4\n4 5\n").unwrap();
    assert_eq!(
        code(&vcgraph(&[
            "partition",
            "-i",
            s(&edges),
            "-n",
            "2",
            "--method",
            "rh",
            "-o",
            s(&parts)
        ])),
        0
    );
    // sssp without a source is a usage error.
    assert_eq!(
        code(&vcgraph(&[
            "run",
            "--algo",
            "sssp",
            "-d",
            s(&parts),
            "-o",
            s(&out)
        ])),
        1
    );
    // Source absent from the graph is a data error.
    assert_eq!(
        code(&vcgraph(&[
            "run",
            "--algo",
            "sssp",
            "--source",
            "99",
            "-d",
            s(&parts),
            "-o",
            s(&out)
        ])),
        2
    );
    // Missing input file.
    let missing = dir.path().join("nope.txt");
    assert_eq!(
        code(&vcgraph(&[
            "partition",
            "-i",
            s(&missing),
            "-n",
            "2",
            "-o",
            s(&parts)
        ])),
        2
    );
    // Unlabeled graph for gsim.
    let q = dir.path().join("q.txt");
    std::fs::write(&q, "v 0 a\n").unwrap();
    assert_eq!(
        code(&vcgraph(&[
            "run",
            "--algo",
            "gsim",
            "--pattern",
            s(&q),
            "-d",
            s(&parts),
            "-o",
            s(&out)
        ])),
        2
    );
    // A one-superstep cap stops the chain before it converges; results are still written.
    std::fs::remove_file(&out).ok();
    let o = vcgraph(&[
        "run",
        "--algo",
        "sssp",
        "--source",
        "1",
        "--max-supersteps",
        "1",
        "-d",
        s(&parts),
        "-o",
        s(&out),
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.exists());
}

#[test]
fn tampered_metrics_refused() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.txt");
    let parts = dir.path().join("p");
    let out = dir.path().join("r.tsv");
    std::fs::write(&edges, "1 2\n2 3\n").unwrap();
    assert_eq!(
        code(&vcgraph(&[
            "partition",
            "-i",
            s(&edges),
            "-n",
            "2",
            "--seed",
            "4",
            "-o",
            s(&parts)
        ])),
        0
    );
    let m = parts.join("metrics.json");
    let text = std::fs::read_to_string(&m)
        .unwrap()
        .replace("\"seed\": 4", "\"seed\": 5");
    std::fs::write(&m, text).unwrap();
    assert_eq!(
        code(&vcgraph(&[
            "run",
            "--algo",
            "cc",
            "-d",
            s(&parts),
            "-o",
            s(&out)
        ])),
        2
    );
}

#[test]
fn all_algorithms_over_tcp() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.txt");
    let labels = dir.path().join("l.txt");
    let q = dir.path().join("q.txt");
    let parts = dir.path().join("p");
    std::fs::write(&edges, "1 2 0.5\n2 3 1.5\n3 1 1\n3 4 2\n").unwrap();
    std::fs::write(&labels, "1 a\n2 b\n3 a\n4 b\n").unwrap();
    std::fs::write(&q, "v 0 a\nv 1 b\ne 0 1\n").unwrap();
    let o = vcgraph(&[
        "partition",
        "-i",
        s(&edges),
        "--labels",
        s(&labels),
        "--weighted",
        "-n",
        "2",
        "--method",
        "rh",
        "-o",
        s(&parts),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let run = |extra: &[&str]| {
        let out = dir.path().join("r.tsv");
        let mut args = vec!["run", "-d", s(&parts), "--transport", "tcp", "-o", s(&out)];
        args.extend_from_slice(extra);
        let o = vcgraph(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(
        run(&["--algo", "sssp", "--source", "1"]),
        "1\t0\n2\t0.5\n3\t2\n4\t4\n"
    );
    assert_eq!(run(&["--algo", "cc"]), "1\t1\n2\t1\n3\t1\n4\t1\n");
    assert_eq!(
        run(&["--algo", "gsim", "--pattern", s(&q)]),
        "1\t0\n2\t1\n3\t0\n4\t1\n"
    );
    assert_eq!(run(&["--algo", "pr", "--sequential"]).lines().count(), 4);
}
