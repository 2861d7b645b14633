use std::process::{Command, Output};

use leafatlas::cli::exit_code;
use leafatlas::error::Error;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leafatlas")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn reflections_report_is_sorted_json() {
    let out = run(&["reflections", "--group", "B2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["hyperplane_count"], 4);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn leaves_at_zero_for_b2() {
    let v = json(&run(&["leaves-zero", "--group", "B2", "--tau", "identity"]));
    let dims: Vec<u64> = v["leaves"].as_array().unwrap().iter().map(|l| l["dim"].as_u64().unwrap()).collect();
    let mut sorted = dims.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(sorted, [4, 2, 2, 0]);
}

#[test]
fn negative_identity_is_accepted_as_tau() {
    let out = run(&["tau-split", "--group", "B3", "--tau", "-1", "--make-full"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["reflections", "--group", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["parabolics", "--group", "B4", "--cap", "100"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name":"x","generators":[[1"#).unwrap();
    assert_eq!(run(&["reflections", "--group", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(exit_code(&Error::Verification("x".into())), 4);
    assert_eq!(exit_code(&Error::BoundTooLarge("x".into())), 3);
}

#[test]
fn group_file_with_generators() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("b2.json");
    std::fs::write(&f, r#"{"name":"mine","generators":[[[-1,0],[0,1]],[[0,1],[1,0]]]}"#).unwrap();
    let v = json(&run(&["reflections", "--group", f.to_str().unwrap()]));
    assert_eq!(v["hyperplane_count"], 4);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["leaves-zero", "--group", "D4", "--tau", "t"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "format = \"text\"\ngroup = \"B2\"\n").unwrap();
    let text = run(&["--config", cfg.to_str().unwrap(), "reflections"]);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("command: reflections\n"));
    let js = run(&["--config", cfg.to_str().unwrap(), "--format", "json", "reflections"]);
    assert_eq!(json(&js)["group"], "B2");
    std::fs::write(&cfg, "colour = \"red\"\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "reflections"]).status.code(), Some(2));
}

#[test]
fn output_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let r = run(&["catalog-B", "--n", "4", "--format", "csv", "--output", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("n,m,r,"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn rank_one_quadric_report() {
    let v = json(&run(&["cherednik-check", "--group", "cyclic2", "--k", "0,1"]));
    assert_eq!(v["gamma"], "1");
    assert_eq!(v["b"], "1/2");
    assert_eq!(v["b_over_k0_minus_k1"], "-1/2");
}
