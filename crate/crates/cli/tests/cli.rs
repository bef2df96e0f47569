//! End-to-end tests that drive the compiled `bicoset-lab` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

/// Runs the binary with `args` and returns its output.
fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicoset-lab"))
        .args(args)
        .output()
        .expect("the binary runs")
}

/// Runs the binary and parses its stdout as a JSON document, asserting the
/// expected exit code first.
fn run_json(args: &[&str], expected_code: i32) -> Value {
    let output = run(args);
    let stderr = String::from_utf8_lossy(&output.stderr).to_string();
    assert_eq!(output.status.code(), Some(expected_code), "stderr: {stderr}");
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON document")
}

fn write_file(path: &Path, content: &str) {
    std::fs::write(path, content).expect("test input writes");
}

const K33_INPUT: &str = "# complete bipartite graph on 3 + 3 vertices\n\
                         DEGREE 3\nGROUP\n(1,2)\n(1,2,3)\nLEFT\n(1,2)\nRIGHT\n(1,2)\n\
                         DREPS\n()\n(1,3)\n";

#[test]
fn three_blocks_certifies_at_the_smallest_block_size() {
    let doc = run_json(&["verify", "three-blocks", "--m", "8"], 0);
    assert_eq!(doc["schema"], "bicoset-lab/1");
    assert_eq!(doc["manifest"]["command"], "verify three-blocks");
    assert_eq!(doc["manifest"]["outcome"], "success");
    let report = &doc["report"];
    assert_eq!(report["degree"], 24);
    assert_eq!(
        report["matrix"],
        serde_json::json!([[4, 1, 3], [2, 6, 0], [2, 1, 5]])
    );
    assert_eq!(
        report["inverse_matrix"],
        serde_json::json!([[4, 2, 2], [1, 6, 1], [3, 0, 5]])
    );
    assert_eq!(report["double_cosets_distinct"], true);
    assert_eq!(report["pair_stabilizer_contains_odd"], true);
    assert_eq!(report["certified"], true);
    assert_eq!(report["certificate"]["verdict"], "Distinct");
}

#[test]
fn three_blocks_rejects_block_sizes_below_eight() {
    let output = run(&["verify", "three-blocks", "--m", "7"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("at least 8"), "stderr: {stderr}");
}

#[test]
fn eight_blocks_re_derives_the_stored_matrix_and_certifies() {
    let doc = run_json(&["verify", "eight-blocks"], 0);
    assert_eq!(doc["manifest"]["outcome"], "success");
    let report = &doc["report"];
    assert_eq!(report["degree"], 32);
    assert_eq!(
        report["matrix"],
        serde_json::json!([
            [1, 1, 1, 1, 0, 0, 0, 0],
            [1, 1, 0, 1, 1, 0, 0, 0],
            [1, 1, 0, 0, 1, 1, 0, 0],
            [1, 1, 1, 0, 0, 1, 0, 0],
            [0, 0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 0, 1, 1],
            [0, 0, 0, 0, 1, 1, 1, 1],
            [0, 0, 1, 0, 0, 1, 1, 1]
        ])
    );
    assert_eq!(report["pair_stabilizer_all_even"], true);
    assert_eq!(report["double_cosets_distinct"], true);
    assert_eq!(report["certified"], true);
    assert_eq!(report["iota"], "(1,2)");
    // Every named check passed.
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["pass"], true, "failed: {}", check["name"]);
    }
}

#[test]
fn artin_reports_the_order_invariants() {
    let doc = run_json(&["artin", "Sym(9)"], 0);
    let report = &doc["report"];
    assert_eq!(report["dominant_prime"], 2);
    assert_eq!(report["ell"], 7);
    assert_eq!(report["omega"], 4);
    assert_eq!(report["psi"], 3);
    assert_eq!(report["f1"], "7/4");
    assert_eq!(report["f2"], "1/2");

    let doc = run_json(&["artin", "Alt(12)"], 0);
    assert_eq!(doc["report"]["f1"], "9/10");
    assert_eq!(doc["report"]["f2"], "-2/15");

    // Shorthand labels are normalized.
    let doc = run_json(&["artin", "PGammaL(2,49)"], 0);
    assert_eq!(doc["report"]["label"], "PSL(2,49).4");
    assert_eq!(doc["report"]["order"]["decimal"], "235200");
}

#[test]
fn artin_rejects_unknown_labels() {
    let output = run(&["artin", "Nonsense(3)"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty());
}

#[test]
fn sameorder_scan_finds_the_linear_collision() {
    let doc = run_json(&["scan", "sameorder", "--bound", "1e6"], 0);
    let collisions = doc["report"]["collisions"].as_array().unwrap();
    assert_eq!(collisions.len(), 1);
    assert_eq!(collisions[0]["order"]["decimal"], "20160");
    assert_eq!(
        collisions[0]["members"],
        serde_json::json!(["PSL(3,4)", "PSL(4,2)"])
    );
}

#[test]
fn sameorder_scan_rejects_oversized_bounds() {
    let output = run(&["scan", "sameorder", "--bound", "1e30"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty());
}

#[test]
fn diophantine_scan_reports_the_unique_solution() {
    let doc = run_json(&["scan", "diophantine", "--k-max", "30"], 0);
    assert_eq!(doc["report"]["solutions"], serde_json::json!([[1, 1]]));
}

#[test]
fn zsigmondy_scan_lists_exactly_the_known_exceptions() {
    let doc = run_json(&["scan", "zsigmondy", "--q-max", "7", "--m-max", "6"], 0);
    assert_eq!(
        doc["report"]["exceptions"],
        serde_json::json!([
            { "m": 6, "q": 2 },
            { "m": 2, "q": 3 },
            { "m": 2, "q": 7 }
        ])
    );
    assert_eq!(doc["report"]["cells"].as_array().unwrap().len(), 6 * 5);
}

#[test]
fn coincidence_scan_reports_only_degree_six() {
    let doc = run_json(&["scan", "coincidence", "--n-max", "12"], 0);
    let findings = doc["report"]["findings"].as_array().unwrap();
    assert_eq!(findings.len(), 4);
    for finding in findings {
        assert_eq!(finding["n"], 6);
        assert_eq!(finding["members"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn bicoset_builds_the_complete_bipartite_graph() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("k33.bct");
    write_file(&input, K33_INPUT);
    let edges = dir.path().join("k33.edges");
    let doc = run_json(
        &[
            "bicoset",
            input.to_str().unwrap(),
            "--symmetry",
            "--edges-out",
            edges.to_str().unwrap(),
        ],
        0,
    );
    let report = &doc["report"];
    assert_eq!(report["n_left"], 3);
    assert_eq!(report["n_right"], 3);
    assert_eq!(report["edge_count"], 9);
    assert_eq!(report["regular"], true);
    assert_eq!(report["connected"], true);
    assert_eq!(report["connectivity_criterion"], true);
    assert_eq!(report["faithful"], true);
    assert_eq!(report["d_size"]["decimal"], "6");
    assert_eq!(report["symmetry"]["aut_order"]["decimal"], "72");
    assert_eq!(report["symmetry"]["vertex_transitive"], true);
    assert_eq!(report["symmetry"]["edge_transitive"], true);
    assert_eq!(report["symmetry"]["semisymmetric"], false);

    // The side file holds the plain edge list the graph command accepts.
    let edge_text = std::fs::read_to_string(&edges).unwrap();
    assert!(edge_text.starts_with("3 3 9\n"));
    let doc = run_json(&["graph", edges.to_str().unwrap()], 0);
    assert_eq!(doc["report"]["aut_order"]["decimal"], "72");
}

#[test]
fn bicoset_runs_are_byte_identical_and_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("k33.bct");
    write_file(&input, K33_INPUT);
    let first = run(&["bicoset", input.to_str().unwrap()]);
    let second = run(&["bicoset", input.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let out = dir.path().join("report.json");
    let third = run(&["bicoset", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(third.status.code(), Some(0));
    assert!(third.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), first.stdout);
}

#[test]
fn bicoset_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.bct");
    write_file(&input, "DEGREE 3\nGROUP\n(1,2)\nLEFT\nRIGHT\n");
    let output = run(&["bicoset", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("DREPS"), "stderr: {stderr}");
}

#[test]
fn bicoset_reports_a_non_subgroup_as_a_failed_check() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("nonsub.bct");
    write_file(&input, "DEGREE 3\nGROUP\n(1,2,3)\nLEFT\n(1,2)\nRIGHT\nDREPS\n()\n");
    let doc = run_json(&["bicoset", input.to_str().unwrap()], 2);
    assert_eq!(doc["manifest"]["outcome"], "check-failed");
    assert!(doc["report"]["error"].as_str().unwrap().contains("not contained"));
}

#[test]
fn graph_budget_exhaustion_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("k33.edges");
    write_file(&input, "3 3 9\n0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n");
    let output = run(&["graph", input.to_str().unwrap(), "--budget", "1"]);
    assert_eq!(output.status.code(), Some(3));
    assert!(output.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("budget"), "stderr: {stderr}");
}

#[test]
fn graph_accepts_adjacency_lines() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("triangle.adj");
    write_file(&input, "3 0-1 1-2 0-2\n");
    let doc = run_json(&["graph", input.to_str().unwrap()], 0);
    assert_eq!(doc["report"]["vertex_count"], 3);
    assert_eq!(doc["report"]["aut_order"]["decimal"], "6");
    assert_eq!(doc["report"]["vertex_transitive"], true);
}

#[test]
fn the_seed_is_recorded_in_the_manifest_and_the_certificate() {
    let doc = run_json(&["verify", "three-blocks", "--m", "8", "--seed", "7"], 0);
    assert_eq!(doc["manifest"]["seed"], 7);
    assert_eq!(doc["report"]["certificate"]["seed"], 7);
}

#[test]
fn the_factor_bound_environment_variable_is_validated() {
    let output = Command::new(env!("CARGO_BIN_EXE_bicoset-lab"))
        .args(["artin", "M11"])
        .env("BICOSET_LAB_FACTOR_BOUND", "banana")
        .output()
        .expect("the binary runs");
    assert_eq!(output.status.code(), Some(1));

    let output = Command::new(env!("CARGO_BIN_EXE_bicoset-lab"))
        .args(["artin", "M11"])
        .env("BICOSET_LAB_FACTOR_BOUND", "1000003")
        .output()
        .expect("the binary runs");
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn help_exits_zero_and_usage_errors_exit_one() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["scan", "--help"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "three-blocks"]).status.code(), Some(1));
    assert_eq!(run(&["scan", "zsigmondy", "--q-max", "9999", "--m-max", "3"]).status.code(), Some(1));
}
