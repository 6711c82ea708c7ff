use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn orbitlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitlab")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_owned()
}

fn q2(rows: [[&str; 2]; 2]) -> Value {
    json!({"field": {"kind": "Q"}, "rows": 2, "cols": 2, "entries": rows})
}

fn gl2_x() -> Value {
    json!({"ambient_dim": 2, "point": {"kind": "conjugation_on_tuple", "value": [
        q2([["1", "0"], ["0", "2"]]), q2([["1", "1"], ["0", "1"]])
    ]}})
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn closed_emits_a_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", &gl2_x());
    let out = orbitlab(&["closed", &x]);
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_json(&out);
    assert_eq!(cert["verdict"], "NotClosed");
    let c = write(dir.path(), "c.json", &cert);
    assert_eq!(orbitlab(&["verify", &c]).status.code(), Some(0));

    let mut bad = cert.clone();
    bad["limit_value"]["value"][0]["entries"][1][1] = json!("3");
    let b = write(dir.path(), "bad.json", &bad);
    assert_eq!(orbitlab(&["verify", &b]).status.code(), Some(3));
}

#[test]
fn destab_over_sl3() {
    let dir = tempfile::tempdir().unwrap();
    let h = json!({"ambient_dim": 3, "det_constraint": "SL", "point": {"kind": "linear_on_vector", "value":
        {"field": {"kind": "Fq", "p": 2, "k": 2}, "rows": 3, "cols": 1, "entries": [[[0, 0]], [[1, 0]], [[0, 0]]]}}});
    let h = write(dir.path(), "h.json", &h);
    let sl = write(dir.path(), "sl.json", &json!({"kind": "full_sl"}));
    let out = orbitlab(&["destab", &h, "--subgroup", &sl, "--bound", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_json(&out);
    assert_eq!(cert["verdict"], "NotClosed");
    assert_eq!(cert["search_bound"], 1);

    let blocks = write(dir.path(), "blocks.json", &json!({"kind": "block_subgroup", "blocks": [2, 2]}));
    assert_eq!(orbitlab(&["destab", &h, "--subgroup", &blocks]).status.code(), Some(2));
    assert_eq!(orbitlab(&["destab", &h, "--subgroup", &sl, "--bound", "0"]).status.code(), Some(2));
}

#[test]
fn gcr_of_a_unipotent_generator() {
    let dir = tempfile::tempdir().unwrap();
    let gens = write(dir.path(), "g.json", &json!({"entries": [q2([["1", "1"], ["0", "1"]])]}));
    let out = orbitlab(&["gcr", &gens]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "NotClosed");
    let both = write(dir.path(), "b.json", &json!({"entries": [q2([["1", "1"], ["0", "1"]]), q2([["1", "0"], ["1", "1"]])]}));
    assert_eq!(stdout_json(&orbitlab(&["gcr", &both]))["verdict"], "Closed");
}

#[test]
fn torus_certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", &json!({"rank": 2, "weights": [[1, 0], [0, 1], [-1, 2]]}));
    let out = orbitlab(&["torus", &s]);
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_json(&out);
    assert_eq!(cert["certificate"]["kind"], "outside");
    let c = write(dir.path(), "c.json", &cert);
    assert_eq!(orbitlab(&["verify", &c]).status.code(), Some(0));
    let mut bad = cert.clone();
    bad["certificate"]["kind"] = json!("in_relative_interior");
    let b = write(dir.path(), "b.json", &bad);
    assert_eq!(orbitlab(&["verify", &b]).status.code(), Some(3));
}

#[test]
fn bad_inputs_are_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(orbitlab(&["closed", "/nonexistent/x.json"]).status.code(), Some(2));
    let shape = write(dir.path(), "s.json", &json!({"ambient_dim": 3, "point": {"kind": "conjugation_on_tuple", "value": [q2([["1", "0"], ["0", "1"]])]}}));
    assert_eq!(orbitlab(&["closed", &shape]).status.code(), Some(2));
    assert_eq!(orbitlab(&["zoo", "run", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn empty_tuple_is_closed() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.json", &json!({"ambient_dim": 2, "point": {"kind": "conjugation_on_tuple", "value": []}}));
    let out = orbitlab(&["closed", &e]);
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_json(&out);
    assert_eq!(cert["verdict"], "Closed");
    let c = write(dir.path(), "c.json", &cert);
    assert_eq!(orbitlab(&["verify", &c]).status.code(), Some(0));
}

#[test]
fn zoo_list_and_run() {
    let out = orbitlab(&["zoo", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("worked/gl2-x\t")));
    let out = orbitlab(&["zoo", "run", "--suite", "gl2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["suite"], "gl2");
    assert!(report["results"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}
