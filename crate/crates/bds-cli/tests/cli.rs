//! End-to-end tests against the compiled binary: exit codes, report shapes,
//! pipelines between subcommands, and byte determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn temp_path(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("bds-cli-{tag}-{}.json", std::process::id()))
}

#[test]
fn check_l_verdicts_and_exit_codes() {
    let out = bds(&["check-l", &fixture("loop.json")]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("condition (L): FAILS"));
    assert!(text.contains("(a, {x})"));
    assert!(text.contains("sha256:"));

    let out = bds(&["check-l", &fixture("double_loop.json")]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("condition (L): holds"));

    let out = bds(&["check-l", &fixture("swap_pair.json")]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("normalized: (aa, {x})"));
}

#[test]
fn check_k_reports_corners() {
    let out = bds(&["check-k", &fixture("two_loops.json")]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("condition (K): FAILS"));
    assert!(text.contains("cross-check: direct, quotient, and tail-space deciders agree"));
    assert!(text.contains("corner obstructions: 2"));
    assert!(text.contains("theory-implied, not computed"));

    let out = bds(&["check-k", &fixture("swap_pair.json")]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("corner dimension 2"));

    let out = bds(&["check-k", &fixture("double_loop_with_entry.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("condition (K): satisfied"));
    assert!(!text.contains("corner obstructions"));
}

#[test]
fn strong_k_exit_codes() {
    let out = bds(&["strong-k", &fixture("double_loop.json")]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("strong condition (K): satisfied"));

    let out = bds(&["strong-k", &fixture("loop.json")]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("strong condition (K): FAILS"));
}

#[test]
fn json_reports_are_valid() {
    let out = bds(&["check-l", "--json", &fixture("loop.json")]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["command"], "check-l");
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["word"]["rendered"], "a");
    assert_eq!(v["witness"]["base"][0], "x");
    assert_eq!(v["sha256"].as_str().unwrap().len(), 64);

    let out = bds(&["check-k", "--json", &fixture("two_loops.json")]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["satisfied"], false);
    assert_eq!(v["cross_checked"], true);
    assert_eq!(v["corners"].as_array().unwrap().len(), 2);
    assert_eq!(v["corners"][0]["matrix_dim"], 1);

    let out = bds(&["prim", "--json", &fixture("double_loop_with_entry.json")]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["order_consistent"], true);
    assert_eq!(v["k_satisfied"], true);
    assert_eq!(v["warning"], serde_json::Value::Null);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    assert_eq!(v["points"][1]["closure"], serde_json::json!([0, 1]));
}

#[test]
fn tails_and_ideals_listings() {
    let out = bds(&["tails", &fixture("loop_with_entry.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("maximal tails: 1"));
    assert!(text.contains("{x,y} cyclic via (a at x)"));

    let out = bds(&["tails", &fixture("double_loop_with_entry.json")]);
    let text = stdout_of(&out);
    assert!(text.contains("maximal tails: 2"));
    assert!(text.contains("not cyclic"));

    let out = bds(&["ideals", &fixture("two_loops.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("hereditary saturated ideals: 4"));
    assert!(text.contains("(full)"));
}

#[test]
fn prim_and_lattice_reports() {
    let out = bds(&["prim", &fixture("double_loop_with_entry.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("primitive-ideal space: 2 points"));
    assert!(text.contains("order consistent with reverse ideal inclusion: yes"));
    assert!(text.contains("condition (K): satisfied"));
    assert!(!text.contains("warning:"));

    let out = bds(&["prim", &fixture("two_loops.json")]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("warning:"));

    let out = bds(&["prim", "--dot", &fixture("double_loop_with_entry.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.starts_with("digraph tail_space {"));
    assert!(text.contains("t0 -> t1;"));

    let out = bds(&["lattice", &fixture("double_loop_with_entry.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("ideals: 3"));
    assert!(text.contains("prime"));
    assert!(text.contains("{} -> {y}"));

    let out = bds(&["lattice", "--dot", &fixture("two_loops.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.starts_with("digraph ideal_lattice {"));
    assert!(text.contains("peripheries=2"));
}

#[test]
fn from_graph_pipes_into_check_k() {
    // Vertex construction of a two-cycle: one atom per vertex, fails (K).
    let vertex_doc = temp_path("vertex");
    let out = bds(&[
        "from-graph",
        &fixture("graph_two_cycle.json"),
        "--construction",
        "vertex",
        "--out",
        vertex_doc.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).is_empty(), "--out leaves stdout empty");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&vertex_doc).unwrap()).unwrap();
    assert_eq!(doc["atoms"], serde_json::json!(["u", "v"]));
    assert_eq!(doc["labels"], serde_json::json!(["e", "f"]));

    let out = bds(&["check-k", vertex_doc.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("condition (K): FAILS"));
    assert!(text.contains("at atom u"));

    // Boundary construction of the same graph also fails (K).
    let out = bds(&["from-graph", &fixture("graph_two_cycle.json"), "--construction", "boundary"]);
    assert_eq!(code(&out), 0);
    let boundary_doc = temp_path("boundary");
    std::fs::write(&boundary_doc, stdout_of(&out)).unwrap();
    let out = bds(&["check-k", boundary_doc.to_str().unwrap()]);
    assert_eq!(code(&out), 1);

    let _ = std::fs::remove_file(&vertex_doc);
    let _ = std::fs::remove_file(&boundary_doc);
}

#[test]
fn reports_are_byte_deterministic() {
    for args in [
        vec!["check-k", "--json"],
        vec!["check-l"],
        vec!["prim"],
        vec!["lattice", "--dot"],
    ] {
        let file = fixture("two_loops.json");
        let mut full = args.clone();
        full.push(&file);
        let first = bds(&full);
        let second = bds(&full);
        assert_eq!(first.stdout, second.stdout, "args {args:?}");
        assert_eq!(code(&first), code(&second));
    }
}

#[test]
fn invalid_inputs_exit_two_and_oversized_exit_three() {
    let out = bds(&["check-l", "/nonexistent/system.json"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());

    let bad = temp_path("bad");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = bds(&["check-k", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // 21 atoms exceed the enumeration cap: listing commands refuse with
    // exit 3, while the polynomial decider still answers.
    let atoms: Vec<String> = (0..21).map(|i| format!("\"u{i}\"")).collect();
    let big = temp_path("big");
    std::fs::write(
        &big,
        format!(
            r#"{{"format_version": 1, "atoms": [{}], "labels": ["a"], "dual_maps": {{}}}}"#,
            atoms.join(", ")
        ),
    )
    .unwrap();
    let out = bds(&["tails", big.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let out = bds(&["check-k", big.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(!stdout_of(&out).contains("cross-check"));

    let _ = std::fs::remove_file(&bad);
    let _ = std::fs::remove_file(&big);
}

#[test]
fn oracle_compare_agrees() {
    let out = bds(&["oracle-compare", "--count", "40", "--jobs", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("disagreements: 0"));
    assert!(text.contains("40 systems"));
}
