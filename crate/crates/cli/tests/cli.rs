use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use flamekit::format::parse_digraph;
use flamekit::{Path, PathSystem};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flamekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json)
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_g1() {
    let (code, report) = run_json(&["analyze", s(&data("g1.graph"))]);
    assert_eq!(code, 0);
    let rows = report["result"]["vertices"].as_array().unwrap();
    assert_eq!(rows[0]["vertex"], "a");
    assert_eq!(rows[0]["lambda"], 2);
    assert_eq!(rows[0]["linked_set"], serde_json::json!(["a"]));
    assert_eq!(rows[1]["lambda"], 2);
    assert_eq!(rows[1]["linked_set"], serde_json::json!(["b"]));
    assert_eq!(report["result"]["acyclic"], true);
    assert!(report["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn analyze_t1_and_dot() {
    let out = run(&["analyze", s(&data("t1.graph")), "--dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("v: λ = 1"));
    assert!(text.contains("digraph D {"));
}

#[test]
fn malformed_input_exits_2_with_line_number() {
    let out = run(&["analyze", s(&data("malformed.graph"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
    let out = run(&["analyze", "/no/such/file"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_verdicts() {
    let g1 = data("g1.graph");
    let partial = data("g1_partial.set");
    let empty = data("empty.set");
    assert_eq!(run(&["check", s(&g1), s(&partial), "--flame"]).status.code(), Some(0));
    assert_eq!(run(&["check", s(&g1), s(&partial), "--large"]).status.code(), Some(1));
    assert_eq!(run(&["check", s(&g1), s(&empty), "--flame"]).status.code(), Some(0));
    assert_eq!(run(&["check", s(&g1), s(&partial), "--g-member"]).status.code(), Some(0));
    assert_eq!(run(&["check", s(&g1), s(&data("t1.graph")), "--flame"]).status.code(), Some(2));
    assert_eq!(run(&["check", s(&g1), s(&partial)]).status.code(), Some(2));
}

#[test]
fn flame_witnesses_re_verify() {
    let g1 = data("g1.graph");
    let (code, report) = run_json(&["check", s(&g1), s(&data("g1_partial.set")), "--flame"]);
    assert_eq!(code, 0);
    let g = parse_digraph(&std::fs::read_to_string(&g1).unwrap()).unwrap();
    let set = g.edge_set(["e1", "e3", "e4"]).unwrap();
    let inner = g.restrict(&set);
    for (vertex, paths) in report["result"]["witnesses"].as_object().unwrap() {
        let v = g.vertex(vertex).unwrap();
        let sys = PathSystem::new(
            paths
                .as_array()
                .unwrap()
                .iter()
                .map(|p| {
                    Path(
                        p.as_array()
                            .unwrap()
                            .iter()
                            .map(|e| g.edge_by_name(e.as_str().unwrap()).unwrap())
                            .collect(),
                    )
                })
                .collect(),
        );
        let target = g.vertex_set([vertex.as_str()]).unwrap();
        sys.check(&inner, Some(g.root()), &target).unwrap();
        let ingoing = flamekit::graph::delta_in(inner, v).unwrap();
        assert_eq!(sys.terminal_edges(g.edge_count()), ingoing);
    }
}

#[test]
fn build_outputs_re_verify() {
    for (file, size) in [("g1.graph", 4), ("comb2.graph", 4), ("t1.graph", 1)] {
        let graph = data(file);
        let (code, report) = run_json(&["build", s(&graph), "--trace"]);
        assert_eq!(code, 0);
        assert_eq!(report["result"]["size"], size);
        assert_eq!(report["result"]["lambda_sum"], size);
        assert!(report["result"]["trace"]["steps"].is_array());

        let dir = tempfile::tempdir().unwrap();
        let set_file = dir.path().join("l.set");
        let ids: Vec<&str> = report["result"]["large_flame"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect();
        std::fs::write(&set_file, ids.join("\n")).unwrap();
        for flag in ["--flame", "--large"] {
            let out = run(&["check", s(&graph), set_file.to_str().unwrap(), flag]);
            assert_eq!(out.status.code(), Some(0), "{file} {flag}");
        }
    }
}

#[test]
fn build_rejects_cycles_and_non_flames() {
    let (code, report) = run_json(&["build", s(&data("c1.graph"))]);
    assert_eq!(code, 1);
    assert_eq!(report["result"]["cycle"], serde_json::json!(["e2", "e3"]));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.set");
    std::fs::write(&bad, "e3\n").unwrap();
    let out = run(&["build", s(&data("g1.graph")), "--extend", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let good = dir.path().join("good.set");
    std::fs::write(&good, "e4\n").unwrap();
    let (code, report) = run_json(&["build", s(&data("g1.graph")), "--extend", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["size"], 4);
}

#[test]
fn verify_suites_are_clean() {
    for args in [
        vec!["verify", "--suite", "greedoid", "--bounds", "n=3,m=5"],
        vec!["verify", "--suite", "szeszler", "--bounds", "n=3,m=5"],
        vec!["verify", "--suite", "constructor", "--random", "100", "--seed", "7"],
        vec!["verify", "--suite", "matroid", "--bounds", "n=2,m=4"],
        vec!["verify", "--suite", "lemma9-equiv", "--bounds", "n=2,m=4"],
        vec!["verify", "--suite", "linked-oracle", "--bounds", "n=2,m=4"],
    ] {
        let (code, report) = run_json(&args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(report["result"]["violations"], serde_json::json!([]));
    }
}

#[test]
fn random_verify_records_seed() {
    let (code, report) = run_json(&["verify", "--suite", "flow", "--random", "5"]);
    assert_eq!(code, 0);
    assert!(report["result"]["spec"]["bounds"]["seed"].is_u64());
}

#[test]
fn verify_bad_bounds_exit_2() {
    assert_eq!(run(&["verify", "--suite", "greedoid", "--bounds", "q=3"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--suite", "flow", "--bounds", "n=9,m=30"]).status.code(),
        Some(2)
    );
}

#[test]
fn search_writes_findings() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("findings.jsonl");
    let out = run(&[
        "search",
        "--question",
        "maximal-flames",
        "--bounds",
        "n=2",
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_file).unwrap();
    let report: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(report["instance_count"].as_u64().unwrap() > 0);

    let (code, report) = run_json(&["search", "--question", "flame-extension-cyclic", "--bounds", "0"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["violations"], serde_json::json!([]));

    let out = run(&[
        "search",
        "--question",
        "maximal-flames",
        "--out",
        "/nonexistent-dir/findings.jsonl",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
