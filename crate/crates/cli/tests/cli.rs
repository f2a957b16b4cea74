//! End-to-end runs of the `dimer-ks` binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimer-ks")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, value: &serde_json::Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path.display().to_string()
}

fn builtin_json(name: &str) -> serde_json::Value {
    let text = dimer_ks::io::builtin_source(name).unwrap();
    serde_json::from_str(text).unwrap()
}

#[test]
fn verify_spp_passes() {
    let o = run(&["verify", "spp.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_inconsistent_dimer_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let mut d = builtin_json("c3");
    for (arrow, shift) in d["arrows"].as_array_mut().unwrap().iter_mut().zip([[0, 0], [1, 0], [-1, 0]]) {
        arrow["shift"] = serde_json::json!(shift);
    }
    let path = write(dir.path(), "degenerate.json", &d);
    let o = run(&["verify", &path]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"]["kind"], "null_homologous");
    assert!(stderr(&o).contains("null-homologous"));
}

#[test]
fn c3_markdown_report_names_the_pair_of_pants() {
    let o = run(&["report", "c3.json", "--format", "markdown", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("# Dimer report: C3"));
    assert!(text.contains("pair of pants"));
    assert!(text.contains("the singularity is smooth"));
}

#[test]
fn bad_sign_names_the_face() {
    let dir = tempfile::tempdir().unwrap();
    let mut d = builtin_json("spp");
    d["faces"][2]["sign"] = serde_json::json!("±");
    let path = write(dir.path(), "typo.json", &d);
    let o = run(&["validate", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("face 2"), "{}", stderr(&o));
}

#[test]
fn malformed_json_is_a_usage_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  \"vertices\": [\n").unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(&["verify", "spp.json", "--n-max", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "spp.json", "--i0", "9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "spp.json", "--base-vertex", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate", "spp.json"]).status.code(), Some(2));
}

#[test]
fn degenerate_ab_override_is_rejected() {
    // For C3 with i0 = 0: U(η_0) = 1 and V(η_0) = 0, so (0, 1) kills class 0.
    let o = run(&["verify", "c3.json", "--ab", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("= 0"));
    let ok = run(&["verify", "c3.json", "--ab=-1,2", "--n-max", "4"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
}

#[test]
fn output_is_deterministic() {
    for args in [["report", "spp.json"], ["hh", "conifold.json"], ["sh", "spp.json"]] {
        let a = run(&[args[0], args[1], "--n-max", "3"]);
        let b = run(&[args[0], args[1], "--n-max", "3"]);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn every_subcommand_accepts_every_builtin() {
    for name in ["c3.json", "conifold.json", "spp.json"] {
        for sub in ["validate", "zigzags", "matchings", "polytope", "dual", "jacobi", "hh", "sh", "verify", "report"] {
            let o = run(&[sub, name, "--n-max", "2"]);
            assert_eq!(o.status.code(), Some(0), "{sub} {name}: {}", stderr(&o));
        }
    }
}

#[test]
fn polytope_lists_spp_boundary_matchings() {
    let o = run(&["polytope", "spp.json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let strict = v["strict_boundary_matchings"].as_array().unwrap();
    let sets: Vec<Vec<String>> = strict
        .iter()
        .map(|m| m.as_array().unwrap().iter().map(|e| e.as_str().unwrap().to_string()).collect())
        .collect();
    assert_eq!(sets, vec![vec!["a".to_string(), "e".into()], vec!["c".to_string(), "g".into()]]);
}
