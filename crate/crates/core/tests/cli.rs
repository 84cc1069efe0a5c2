//! End-to-end checks of the command-line interface: JSON shapes, exit
//! codes, and stdin handling.

use std::io::Write;
use std::process::{Command, Stdio};

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tropcrys"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = exe().args(args).output().expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn run_json(args: &[&str]) -> serde_json::Value {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, 0, "args {args:?} failed: {stderr}");
    serde_json::from_str(&stdout).expect("stdout is JSON")
}

#[test]
fn enum_lists_elements_with_count() {
    let v = run_json(&["crystal", "enum", "--n", "2", "--l", "2"]);
    assert_eq!(v["count"], 6);
    assert_eq!(v["elements"].as_array().unwrap().len(), 6);
    assert_eq!(v["elements"][0]["level"], 2);
}

#[test]
fn apply_reads_stdin_and_reports_boundaries() {
    let mut child = exe()
        .args(["crystal", "apply", "--op", "f0", "--elt", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"n":2,"level":1,"b1":[0,1],"b2":[0,1]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["b1"], serde_json::json!([1, 0]));
    assert_eq!(v["b2"], serde_json::json!([1, 0]));

    // A blocked lowering prints JSON null and still exits 0.
    let mut child = exe()
        .args(["crystal", "apply", "--op", "f1", "--elt", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"n":2,"level":1,"b1":[0,1],"b2":[0,1]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "null");
}

#[test]
fn apply_reads_files_and_rejects_bad_input() {
    let dir = std::env::temp_dir().join("tropcrys-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("elt.json");
    std::fs::write(&path, r#"{"n":3,"level":"inf","b1":[3,1,-4],"b2":[1,1,-2]}"#).unwrap();
    let v = run_json(&["crystal", "apply", "--op", "e0", "--elt", path.to_str().unwrap()]);
    assert_eq!(v["level"], "inf");

    let (code, _, stderr) = run(&["crystal", "apply", "--op", "q3", "--elt", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{stderr}");
    let (code, _, _) = run(&["crystal", "apply", "--op", "f9", "--elt", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["crystal", "apply", "--op", "f0", "--elt", "/nonexistent.json"]);
    assert_eq!(code, 2);
}

#[test]
fn graph_formats() {
    let v = run_json(&["crystal", "graph", "--n", "2", "--l", "1"]);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
    let (code, stdout, _) = run(&["crystal", "graph", "--n", "2", "--l", "1", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("digraph crystal {"));
    assert!(stdout.trim_end().ends_with('}'));
    let (code, _, _) = run(&["crystal", "graph", "--n", "2", "--l", "1", "--format", "svg"]);
    assert_eq!(code, 2);
}

#[test]
fn perfect_reports_pass() {
    let v = run_json(&["crystal", "perfect", "--n", "3", "--l", "2"]);
    assert_eq!(v["minimal_count"], 10);
    assert_eq!(v["expected_minimal"], 10);
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn geom_eval_values_and_errors() {
    let v = run_json(&["geom", "eval", "--n", "3", "--point", "1,2,3,4", "--action", "gamma0"]);
    assert_eq!(v["value"], "1/6");
    let v = run_json(&["geom", "eval", "--n", "3", "--point", "1,2,3,4", "--action", "eps0"]);
    assert_eq!(v["value"], "5/2");
    let v = run_json(&[
        "geom", "eval", "--n", "2", "--point", "3,5", "--action", "e0", "--c", "4",
    ]);
    assert_eq!(v["result"]["x"], serde_json::json!(["3/4", "5/4"]));

    // Actions need a parameter; singular points and bad names are domain
    // errors.
    let (code, _, _) = run(&["geom", "eval", "--n", "2", "--point", "3,5", "--action", "e0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["geom", "eval", "--n", "2", "--point", "0,5", "--action", "gamma1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["geom", "eval", "--n", "2", "--point", "3,5", "--action", "zeta1"]);
    assert_eq!(code, 2);
}

#[test]
fn geom_verify_emits_report() {
    let v = run_json(&[
        "geom", "verify", "--suite", "sigma-commute", "--n", "4", "--trials", "10", "--seed", "3",
    ]);
    assert_eq!(v["suite"], "sigma-commute");
    assert_eq!(v["failure_count"], 0);
    assert_eq!(v["trials"], 10);
    let (code, _, _) = run(&["geom", "verify", "--suite", "nope", "--n", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn ud_apply_and_tropicalize() {
    let v = run_json(&["ud", "apply", "--op", "f0", "--point", "0,0,0,0", "--n", "3"]);
    assert_eq!(v["x"], serde_json::json!([0, 1, 1, 1]));
    let v = run_json(&["ud", "apply", "--op", "e2", "--point", "1,2,3,4", "--n", "3"]);
    assert_eq!(v["x"], serde_json::json!([1, 2, 3, 5]));

    let v = run_json(&["ud", "tropicalize", "--target", "gamma1", "--n", "2"]);
    assert_eq!(v["tropical"], "((x3 + x3) - x2)");
    assert_eq!(v["source"], "((x3 * x3) / x2)");
    let v = run_json(&["ud", "tropicalize", "--target", "e1:3", "--n", "2"]);
    assert_eq!(v["tropical"], "(c + x3)");
    let (code, _, _) = run(&["ud", "tropicalize", "--target", "what", "--n", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn ud_check_modes_and_exit_codes() {
    let v = run_json(&["ud", "check", "--suite", "iso", "--n", "2", "--box", "2"]);
    assert_eq!(v["failure_count"], 0);
    assert_eq!(v["points"], 25);
    let v = run_json(&[
        "ud", "check", "--suite", "mechanical", "--n", "4", "--trials", "100", "--seed", "8",
    ]);
    assert_eq!(v["failure_count"], 0);
    // Box and sampling flags are mutually exclusive.
    let (code, _, _) = run(&[
        "ud", "check", "--suite", "iso", "--n", "2", "--box", "2", "--trials", "5",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["ud", "check", "--suite", "iso", "--n", "4", "--box", "9"]);
    assert_eq!(code, 3);
}

#[test]
fn usage_and_cap_exit_codes() {
    let (code, _, _) = run(&["crystal", "enum", "--n", "2"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["nonsense"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["crystal", "enum", "--n", "2", "--l", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["crystal", "enum", "--n", "6", "--l", "40"]);
    assert_eq!(code, 3);
}
