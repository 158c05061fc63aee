use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rlc_core::sample_graphs::SIX_VERTEX_EDGES as SIX_VERTEX;

fn rlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rlc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn built_sample(dir: &Path) -> std::path::PathBuf {
    let graph = dir.join("g.el");
    let index = dir.join("g.rlc");
    fs::write(&graph, SIX_VERTEX).unwrap();
    let o = rlc(&["build", "--graph", p(&graph), "--k", "2", "--out", p(&index)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    index
}

#[test]
fn build_then_query_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let index = built_sample(dir.path());
    for (s, t, labels, want) in
        [("v3", "v6", "l2 l1", "true"), ("v1", "v2", "l2 l1", "true"), ("v1", "v3", "l1", "false")]
    {
        let o = rlc(&["query", "--index", p(&index), "--s", s, "--t", t, "--labels", labels]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), want, "({s}, {t}, {labels})");
    }
}

#[test]
fn star_accepts_empty_path() {
    let dir = tempfile::tempdir().unwrap();
    let index = built_sample(dir.path());
    let plus = rlc(&["query", "--index", p(&index), "--s", "v6", "--t", "v6", "--labels", "l1"]);
    let star = rlc(&["query", "--index", p(&index), "--s", "v6", "--t", "v6", "--labels", "l1", "--star"]);
    assert_eq!(stdout(&plus).trim(), "false");
    assert_eq!(stdout(&star).trim(), "true");
}

#[test]
fn gen_graph_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.el");
    let b = dir.path().join("b.el");
    for out in [&a, &b] {
        let o = rlc(&[
            "gen-graph",
            "--model",
            "er",
            "--n",
            "1000",
            "--deg",
            "5",
            "--labels",
            "8",
            "--zipf",
            "2.0",
            "--seed",
            "7",
            "--out",
            p(out),
        ]);
        assert!(o.status.success());
    }
    let bytes = fs::read(&a).unwrap();
    assert!(!bytes.is_empty());
    assert_eq!(bytes, fs::read(&b).unwrap());
}

#[test]
fn domain_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let index = built_sample(dir.path());
    let cases: [&[&str]; 4] = [
        &["--s", "v9", "--t", "v1", "--labels", "l1"],
        &["--s", "v1", "--t", "v1", "--labels", "l1 l2 l3"],
        &["--s", "v1", "--t", "v1", "--labels", "l1 l1"],
        &["--s", "v1", "--t", "v1", "--labels", "l7"],
    ];
    for case in cases {
        let mut args = vec!["query", "--index", p(&index)];
        args.extend_from_slice(case);
        let o = rlc(&args);
        assert_eq!(o.status.code(), Some(1), "{case:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    let missing = rlc(&["stats", "--graph", p(&dir.path().join("nope.el"))]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(rlc(&["query", "--index"]).status.code(), Some(2));
    assert_eq!(rlc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rlc(&["gen-graph", "--n", "ten"]).status.code(), Some(2));
    let bad = rlc(&["bench", "--graph", "g", "--workload", "w", "--evaluators", "index,oracle"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn workload_bench_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let graph = d.join("er.el");
    let workload = d.join("w.csv");
    let index = d.join("er.rlc");
    assert!(rlc(&["gen-graph", "--n", "300", "--deg", "3", "--labels", "3", "--seed", "1", "--out", p(&graph)])
        .status
        .success());
    let o = rlc(&[
        "gen-workload",
        "--graph",
        p(&graph),
        "--true-queries",
        "20",
        "--false-queries",
        "20",
        "--seed",
        "2",
        "--out",
        p(&workload),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&workload).unwrap();
    assert_eq!(csv.lines().count(), 41);
    assert_eq!(csv.matches(",true").count(), 20);

    let o = rlc(&[
        "bench",
        "--graph",
        p(&graph),
        "--workload",
        p(&workload),
        "--evaluators",
        "index,bfs,bibfs,etc",
        "--repeats",
        "1",
        "--format",
        "csv",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = stdout(&o);
    let kinds: Vec<&str> = report.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(kinds, ["index", "bfs", "bibfs", "etc"]);

    assert!(rlc(&["build", "--graph", p(&graph), "--out", p(&index)]).status.success());
    let o = rlc(&[
        "bench",
        "--graph",
        p(&graph),
        "--workload",
        p(&workload),
        "--index",
        p(&index),
        "--build-secs",
        "0.5",
        "--repeats",
        "1",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("bibfs"));
}

#[test]
fn round_trip_matches_in_memory_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("ba.el");
    let index = dir.path().join("ba.rlc");
    assert!(rlc(&[
        "gen-graph",
        "--model",
        "ba",
        "--n",
        "60",
        "--m",
        "2",
        "--labels",
        "3",
        "--seed",
        "4",
        "--out",
        p(&graph)
    ])
    .status
    .success());
    assert!(rlc(&["build", "--graph", p(&graph), "--k", "2", "--out", p(&index)]).status.success());

    let g = rlc_core::graph::load_edge_list_path(&graph).unwrap();
    let memory = rlc_core::build_index(&g, 2).unwrap();
    for (s, t, labels) in [("0", "1", "l1"), ("5", "0", "l1 l2"), ("59", "2", "l2"), ("10", "10", "l3 l1")] {
        let o = rlc(&["query", "--index", p(&index), "--s", s, "--t", t, "--labels", labels]);
        let expected = memory.query_named(s, t, labels).unwrap();
        assert_eq!(stdout(&o).trim(), expected.to_string(), "({s}, {t}, {labels})");
    }
}

#[test]
fn stats_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let index = built_sample(dir.path());
    let o = rlc(&["stats", "--index", p(&index)]);
    assert!(stdout(&o).contains("entries=26"));
    let o = rlc(&["stats", "--graph", p(&dir.path().join("g.el"))]);
    assert!(stdout(&o).contains("edges=11"));
    let o = rlc(&["verify", "--graphs", "8", "--max-n", "15", "--seed", "3", "--mode", "sequential"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("mismatches=0"));
}
