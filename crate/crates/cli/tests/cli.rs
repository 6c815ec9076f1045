use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

const SWAP2: &str = r#"{"size":2,"lambda":[[1,0],[1,0]]}"#;
const SOL4: &str = r#"{"size":4,"lambda":[[0,1,2,3],[0,2,1,3],[0,2,1,3],[0,1,2,3]]}"#;
const TRIVIAL1: &str = r#"{"size":1,"lambda":[[0]]}"#;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brace-forge"))
        .args(args)
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn with_input(cmd: &[&str], input: &Path) -> Output {
    let mut args = cmd.to_vec();
    args.extend(["--input", input.to_str().unwrap()]);
    run(&args)
}

#[test]
fn validate_and_mpl() {
    let dir = TempDir::new().unwrap();
    let out = with_input(&["validate"], &write(&dir, "swap2.json", SWAP2));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), json!({"valid": true}));
    let out = with_input(&["mpl"], &write(&dir, "sol4.json", SOL4));
    assert_eq!(json_of(&out), json!({"mpl": 2}));
}

#[test]
fn embed_trivial_uses_modulus_two() {
    let dir = TempDir::new().unwrap();
    let out = with_input(&["embed"], &write(&dir, "trivial1.json", TRIVIAL1));
    let v = json_of(&out);
    assert_eq!(v["modulus"], 2);
    assert_eq!(v["dim"], 1);
    assert_eq!(v["lambda"].as_array().unwrap().len(), 2);
}

#[test]
fn embed_round_trips_through_check() {
    let dir = TempDir::new().unwrap();
    let sol = write(&dir, "sol4.json", SOL4);
    let emb = dir.path().join("emb.json");
    let out = run(&["embed", "--input", sol.to_str().unwrap(), "--output", emb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let from_file = with_input(&["check", "--what", "prop5"], &emb);
    let in_process = with_input(&["check", "--what", "prop5"], &sol);
    assert_eq!(json_of(&from_file), json_of(&in_process));
    assert_eq!(json_of(&from_file)["prop5"]["holds"], true);
    assert_eq!(json_of(&from_file)["prop5"]["mpl"], 2);
}

#[test]
fn check_runs_every_applicable_test() {
    let dir = TempDir::new().unwrap();
    let v = json_of(&with_input(&["check"], &write(&dir, "swap2.json", SWAP2)));
    for key in ["prop5", "socle-commutator", "theorem-one", "eq2", "binomial", "two-sided", "retract-iso"] {
        assert_eq!(v[key]["holds"], true, "{key}");
    }
    let emb = dir.path().join("b.json");
    run(&["embed", "--input", dir.path().join("swap2.json").to_str().unwrap(), "--output", emb.to_str().unwrap()]);
    let v = json_of(&with_input(&["check"], &emb));
    assert!(v.get("theorem-one").is_none());
    let out = with_input(&["check", "--what", "eq2"], &emb);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one_with_diagnostic() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"size":2,"lambda":[[1,1],[0,0]]}"#);
    let out = with_input(&["validate"], &bad);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"], "NotABijection");
    let garbage = write(&dir, "garbage.json", "{not json");
    let out = with_input(&["mpl"], &garbage);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"], "Malformed");
    let out = run(&["enumerate", "--m", "7"]);
    assert_eq!(json_of(&out)["error"], "CapExceeded");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["mpl", "--input", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(run(&["groupring", "--group", "q8"]).status.code(), Some(2));
}

#[test]
fn enumerate_and_census() {
    let v = json_of(&run(&["enumerate", "--m", "3"]));
    assert_eq!(v["count"], 5);
    let v = json_of(&run(&["enumerate", "--m", "2", "--labeled"]));
    assert_eq!(v["count"], 2);
    let out = run(&["census", "--m", "2", "--threads", "2"]);
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["mpl"], 1);
    assert_eq!(lines[1]["perm_group_order"], 2);
    assert_eq!(lines[1]["embedded_brace_order"], 4);
    assert_eq!(lines[1]["two_sided"], true);
    assert_eq!(run(&["census", "--m", "3"]).stdout, run(&["census", "--m", "3"]).stdout);
}

#[test]
fn group_ring_embedding() {
    let v = json_of(&run(&["groupring", "--group", "sym3", "--k", "3"]));
    assert_eq!(v["image_size"], 6);
    assert_eq!(v["pairs_checked"], 36);
    assert_eq!(v["ring_size"], "729");
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", r#"{"degree":3,"generators":[[1,2,0]]}"#);
    let v = json_of(&run(&["groupring", "--input", g.to_str().unwrap(), "--k", "2"]));
    assert_eq!(v["group_order"], 3);
}

#[test]
fn info_and_chains() {
    let dir = TempDir::new().unwrap();
    let sol = write(&dir, "sol4.json", SOL4);
    let v = json_of(&with_input(&["info"], &sol));
    assert_eq!(v["perm_group_order"], 2);
    assert_eq!(v["embedded_brace_order"], 16);
    assert_eq!(v["retract_size"], 2);
    let v = json_of(&with_input(&["chains"], &sol));
    assert_eq!(v["right"], json!([16, 2, 1]));
    let v = json_of(&with_input(&["retract"], &sol));
    assert_eq!(v["retracted"]["size"], 2);
}
