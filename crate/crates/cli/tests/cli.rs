use serde_json::Value;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../core/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn praag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_praag")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = praag(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("praag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn analyze_mennicke() {
    let r = json(&["analyze", &fixture("mennicke.pgraph"), "--json"]);
    assert_eq!(r["jacobi_fails"].as_array().unwrap().len(), 1);
    assert_eq!(r["abelianization"]["ok"]["group"], "Z/5 + Z/5 + Z/5");
    assert_eq!(r["cyclotomic"]["ok"]["cyclotomic"], false);
    assert!(r["quadraticity"]["Unknown"].is_array());
}

#[test]
fn analyze_c4() {
    let r = json(&["analyze", &fixture("c4.pgraph"), "--json"]);
    assert_eq!(r["triangle_free"], true);
    assert_eq!(r["mild_up_to"], 8);
    assert_eq!(r["predicted"]["betti"], serde_json::json!([1, 4, 4]));
    assert_eq!(r["ggs"]["ok"]["result"], "certificate");
    let text = String::from_utf8(praag(&["analyze", &fixture("c4.pgraph")]).stdout).unwrap();
    assert!(text.contains("mild_up_to=8"));
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let args = ["analyze", &fixture("book.pgraph"), "--json"];
    let a = praag(&args).stdout;
    let b = praag(&args).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", String::from_utf8(a).unwrap());
}

#[test]
fn flags_override_file_prime() {
    let r = json(&["analyze", &fixture("c4.pgraph"), "--p", "7", "--precision", "3", "--json"]);
    assert_eq!(r["input"]["p"], 7);
    assert_eq!(r["input"]["precision"], 3);
}

#[test]
fn classify_triangle() {
    let r = json(&["classify-triangle", "--p", "5", "--labels", "5,5,5,5,5,5", "--json"]);
    assert_eq!(r["family"], "Lstar");
    assert_eq!(r["metabelian"], false);
}

#[test]
fn amalgam_and_hnn() {
    assert_eq!(praag(&["amalgam", &fixture("book.json")]).status.code(), Some(2));
    let r = json(&["amalgam", &fixture("book.json"), "--assume-proper", "--json", "--depth", "4"]);
    assert_eq!(r["dims"], serde_json::json!([1, 4, 5, 2, 0]));
    let r = json(&["amalgam", &fixture("amalg1.json"), "--json"]);
    assert_eq!(r["dims"], Value::Null);
    let r = json(&["hnn", &fixture("hnn1.json"), "--assume-proper", "--json", "--depth", "3"]);
    assert_eq!(r["cohomology"]["dims"], serde_json::json!([1, 4, 5, 2]));
    let r = json(&["hnn", &fixture("hnncondii.json"), "--assume-proper", "--json"]);
    assert_eq!(r["hypotheses"]["condition_ii"]["holds"], false);
    assert_eq!(praag(&["hnn", &fixture("book.json"), "--assume-proper"]).status.code(), Some(2));
}

#[test]
fn ggs_and_lazard() {
    let r = json(&["ggs", &fixture("c4.pgraph"), "--grid", "5", "--json"]);
    assert_eq!(r["t0"], "3/5");
    assert_eq!(r["value"], "-7/125");
    let r = json(&["lazard-verify", &fixture("gamma2.pgraph"), "--precision", "4", "--json"]);
    assert_eq!(r["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(praag(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(praag(&["--help"]).status.code(), Some(0));
    let bad = scratch("bad.pgraph", "pgraph v1\nvertices a b\nedge a c 5 5\n");
    let out = praag(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(praag(&["analyze", "/nonexistent/x.pgraph"]).status.code(), Some(2));
    let vague = scratch("vague.pgraph", "pgraph v1\nvertices a b\nedge a b 0~ 5\n");
    assert_eq!(praag(&["ggs", &vague]).status.code(), Some(3));
    assert_eq!(praag(&["lazard-verify", &vague, "--precision", "3"]).status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_praag"))
        .args(["analyze", &fixture("c4.pgraph")])
        .env("PRAAG_MAX_MATRIX", "lots")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn matrix_cap_leaves_mildness_undecided() {
    let out = Command::new(env!("CARGO_BIN_EXE_praag"))
        .args(["analyze", &fixture("c4.pgraph"), "--json"])
        .env("PRAAG_MAX_MATRIX", "100")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["mildness"]["verdict"]["Undecided"].is_object());
}
