//! Golden tests for the command-line contract: output bytes, exit codes,
//! and determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_walkcent"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn cospectral_on_path_graph6() {
    let out = run(&["cospectral", "--format", "g6"], "Bg\n");
    assert!(out.status.success());
    assert_eq!(
        stdout_str(&out),
        "{\"classes\":[[0,2],[1]],\"n\":3,\"schema_version\":1,\"walk_regular\":false}\n"
    );
}

#[test]
fn centrality_subgraph_on_k2_matches_cosh_one() {
    let out = run(
        &["centrality", "--fn", "subgraph", "--beta", "1", "--prec", "50"],
        "0 1\n",
    );
    assert!(out.status.success());
    let text = stdout_str(&out);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    for val in values {
        assert!(val.as_str().unwrap().starts_with("1.5430806348152437"));
    }
    assert_eq!(v["class_members"].as_array().unwrap().len(), 1);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn entropy_on_triangle_is_maximal_ln_three() {
    let out = run(&["entropy", "--beta", "1"], "0 1\n1 2\n0 2\n");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(v["entropy"].as_str().unwrap().starts_with("1.0986122886"));
    assert_eq!(v["maximal"], true);
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let args = ["analyze", "--beta", "1/2", "--prec", "50", "--format", "g6"];
    let first = run(&args, "Cs\n");
    let second = run(&args, "Cs\n");
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn malformed_edge_list_exits_2() {
    let out = run(&["cospectral"], "0 1\nnot an edge\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn malformed_graph6_exits_2() {
    let out = run(&["walkreg", "--format", "g6"], "\x1f\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn beta_zero_rejected_with_exit_2() {
    let out = run(
        &["centrality", "--fn", "subgraph", "--beta", "0"],
        "0 1\n",
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn alpha_out_of_range_exits_2() {
    let out = run(
        &["centrality", "--fn", "resolvent", "--alpha", "2"],
        "0 1\n",
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = run(&["frobnicate"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn walkreg_true_on_cycle() {
    let out = run(&["walkreg"], "0 1\n1 2\n2 3\n0 3\n");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["walk_regular"], true);
}

#[test]
fn mine_reports_malformed_lines_with_exit_2() {
    let out = run(
        &[
            "mine",
            "--format",
            "g6",
            "--predicate",
            "walk-regular",
        ],
        "Bw\n!!\n",
    );
    assert_eq!(out.status.code(), Some(2));
    let text = stdout_str(&out);
    let last = text.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(last).unwrap();
    assert_eq!(v["kind"], "summary");
    assert_eq!(v["counts"]["walk-regular"], 1);
    assert_eq!(v["malformed_lines"].as_array().unwrap().len(), 1);
}

#[test]
fn mine_clean_stream_exits_0() {
    let out = run(
        &["mine", "--format", "g6", "--predicate", "walk-regular", "--workers", "2"],
        "Bw\nBg\n",
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 2); // one finding + summary
}

#[test]
fn solve_beta_pair_finds_fixture_root() {
    // 6-vertex crossing fixture; root near 1.7789
    let out = run(
        &["solve-beta", "--format", "g6", "--pair", "0,2", "--prec", "50"],
        "Eja?\n",
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert!(roots[0]["lo"]
        .as_str()
        .unwrap()
        .starts_with("1.778891795030934088892640156378226322842886"));
}

#[test]
fn solve_beta_on_cospectral_pair_reports_degenerate() {
    // vertices 2,3 of the fixture are exchanged by an automorphism
    let out = run(
        &["solve-beta", "--format", "g6", "--pair", "2,3", "--prec", "50"],
        "Eja?\n",
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["cospectral"], true);
    assert_eq!(v["roots"].as_array().unwrap().len(), 0);
}

#[test]
fn analyze_directed_input_skips_spectral_sections() {
    let out = run(&["analyze", "--beta", "1"], "n=2 directed=true\n0 1\n");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(v["spectral"].is_null());
    assert_eq!(v["subgraph_centrality"]["function"], "subgraph-taylor");
    assert!(v["note"].as_str().unwrap().contains("directed"));
}

#[test]
fn solve_beta_on_walk_regular_reports_gracefully() {
    let out = run(&["solve-beta"], "0 1\n1 2\n2 3\n0 3\n");
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["walk_regular"], true);
    assert_eq!(v["candidates"].as_array().unwrap().len(), 0);
}

#[test]
fn csv_output_for_centrality() {
    let out = run(
        &["centrality", "--fn", "degree", "--output", "csv"],
        "0 1\n1 2\n",
    );
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vertex,value,class"));
    assert!(text.contains("1,2."));
}

#[test]
fn table_output_for_centrality() {
    let out = run(
        &["centrality", "--fn", "degree", "--output", "table", "--prec", "30"],
        "0 1\n1 2\n",
    );
    assert!(out.status.success());
    assert!(stdout_str(&out).starts_with("vertex  class  value"));
}

#[test]
fn file_input_equivalent_to_stdin() {
    let dir = std::env::temp_dir().join("walkcent-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p3.edges");
    std::fs::write(&path, "0 1\n1 2\n").unwrap();
    let from_file = run(&["cospectral", path.to_str().unwrap()], "");
    let from_stdin = run(&["cospectral"], "0 1\n1 2\n");
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_stdin.stdout);
}
