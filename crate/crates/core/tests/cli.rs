use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn errgroup(args: &[&str], stdin: Option<&[u8]>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_errgroup"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn exit_codes() {
    assert_eq!(errgroup(&["--help"], None, &[]).status.code(), Some(0));
    assert_eq!(errgroup(&["--version"], None, &[]).status.code(), Some(0));
    assert_eq!(errgroup(&["basis"], None, &[]).status.code(), Some(2));
    assert_eq!(errgroup(&["code", "build", "--instance", "x", "--bogus"], None, &[]).status.code(), Some(2));
    let bad = errgroup(&["code", "build", "--instance", "nope"], None, &[]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["error"]["kind"], "invalid_argument");
    let garbage = errgroup(&["basis", "verify"], Some(b"not json"), &[]);
    assert_eq!(garbage.status.code(), Some(1));
    assert_eq!(json(&garbage)["error"]["kind"], "json");
}

#[test]
fn cap_from_environment() {
    let o = errgroup(&["basis", "egner"], None, &[]);
    let small = errgroup(&["group", "close"], Some(&o.stdout), &[("ERRGROUP_CAP", "10")]);
    assert_eq!(small.status.code(), Some(1));
    assert_eq!(json(&small)["error"]["kind"], "group_too_large");
    // the flag wins over the environment
    let ok = errgroup(&["--cap", "1000", "group", "close"], Some(&o.stdout), &[("ERRGROUP_CAP", "10")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["order"], 32);
}

#[test]
fn pipeline_through_stdin() {
    let b = errgroup(&["basis", "pauli", "-p", "3"], None, &[]);
    let g = errgroup(&["group", "close", "--phase", "3"], Some(&b.stdout), &[]);
    assert_eq!(json(&g)["order"], 27);
    let c = errgroup(&["group", "center"], Some(&g.stdout), &[]);
    assert_eq!(json(&c)["scalar"], true);
    let t = errgroup(&["group", "chartable"], Some(&g.stdout), &[]);
    assert_eq!(t.status.code(), Some(0));
}

#[test]
fn workspace_and_out_file() {
    let tmp = tempfile::tempdir().unwrap();
    let ws = tmp.path().join("ws");
    let ws = ws.to_str().unwrap();
    let save = errgroup(&["--workspace", ws, "--save", "e", "basis", "egner"], None, &[]);
    assert_eq!(save.status.code(), Some(0));
    let manifest: Value = serde_json::from_slice(&std::fs::read(tmp.path().join("ws/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["e"]["kind"], "basis");
    let out = tmp.path().join("report.json");
    let v = errgroup(&["--workspace", ws, "--out", out.to_str().unwrap(), "basis", "verify", "e"], None, &[]);
    assert_eq!(v.status.code(), Some(0));
    assert!(v.stdout.is_empty());
    let report: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["cocycle"]["orders"], serde_json::json!([1, 2]));
    // saving needs a workspace
    assert_eq!(errgroup(&["--save", "x", "basis", "pauli"], None, &[]).status.code(), Some(1));
}

#[test]
fn gf4_demo_reports() {
    let q = errgroup(&["classical", "quantum", "--instance", "gf4-demo"], None, &[]);
    let v = json(&q);
    assert_eq!(v["invariance"]["matches"], true);
    let t = errgroup(&["transversal", "ops", "--instance", "bitflip3"], None, &[]);
    assert_eq!(json(&t)["closed"], true);
}
