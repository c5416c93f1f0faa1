use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn pathspace(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pathspace"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn pathspace");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let out = pathspace(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str], stdin: &str) -> Value {
    serde_json::from_str(&ok(args, stdin)).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn nset_family_piped_into_poincare() {
    let inst = ok(&["family", "nset", "--n", "3", "--k", "2,2,2"], "");
    let doc = json(&["poincare"], &inst);
    assert_eq!(doc["series"], serde_json::json!({"2": "8", "3": "1"}));
    assert_eq!(doc["field"], "Q");
}

#[test]
fn sequal_family_piped_into_betti() {
    let inst = ok(&["family", "sequal", "--n", "4", "--s", "3", "--k", "1,1,1,1"], "");
    let doc = json(&["betti"], &inst);
    assert_eq!(doc["betti"], serde_json::json!({"1": "7"}));
}

#[test]
fn connectivity_of_single_four_set() {
    let doc = json(&["connectivity"], r#"{"n":4,"k":[1,1,1,1],"generators":[[1,2,3,4]]}"#);
    assert_eq!(doc["connectivity"], 2);
    assert!(doc["remark"].as_str().unwrap().contains("i <= 1"));
}

#[test]
fn betti_is_series_shifted_down() {
    let inst = ok(&["family", "sequal", "--n", "5", "--s", "2", "--k", "2"], "");
    for field in ["q", "fp:2", "fp:3"] {
        let doc = json(&["poincare", "--field", field], &inst);
        let series = doc["series"].as_object().unwrap();
        let betti = doc["betti"].as_object().unwrap();
        assert_eq!(series.len(), betti.len());
        for (e, c) in series {
            let d = (e.parse::<i64>().unwrap() - 1).to_string();
            assert_eq!(&betti[&d], c);
        }
    }
}

#[test]
fn family_output_round_trips() {
    for args in [
        vec!["family", "nset", "--n", "4", "--k", "3,1,2,2"],
        vec!["family", "sequal", "--n", "5", "--s", "3", "--k", "2"],
        vec!["family", "binary", "--n", "4", "--s", "3"],
    ] {
        let inst = ok(&args, "");
        let doc = json(&["connectivity"], &inst);
        let echoed: Value = serde_json::from_str(&inst).unwrap();
        assert_eq!(doc["metadata"]["instance"], echoed, "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let inst = ok(&["family", "sequal", "--n", "5", "--s", "2", "--k", "2"], "");
    let a = ok(&["dual"], &inst);
    let b = ok(&["dual"], &inst);
    assert_eq!(a, b);
    let doc: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["duality_holds"], true);
}

#[test]
fn dropped_generator_warns_on_stderr() {
    let text = r#"{"n":3,"k":[1,1,1],"generators":[[1,2],[1,2,3]]}"#;
    let out = pathspace(&["poincare"], text);
    assert!(out.status.success());
    assert!(stderr_of(&out).contains("{1,2,3}"));
    let quiet = pathspace(&["poincare", "--quiet"], text);
    assert!(stderr_of(&quiet).is_empty());
}

#[test]
fn invalid_input_exits_one_and_names_field() {
    let out = pathspace(&["poincare"], r#"{"n":3,"k":[1,1,1],"generators":[[2]]}"#);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("generators[0]"));
    let out = pathspace(&["poincare", "--field", "fp:4"], "");
    assert_eq!(out.status.code(), Some(1));
    let out = pathspace(&["poincare"], "not json");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn resource_cap_exits_two_and_names_cap() {
    let inst = ok(&["family", "sequal", "--n", "6", "--s", "2", "--k", "3"], "");
    let out = pathspace(&["poincare", "--max-terms", "5"], &inst);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("max-terms"));
    let small = ok(&["family", "binary", "--n", "4"], "");
    let out = pathspace(&["poincare", "--max-matrix", "1"], &small);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("max-matrix"));
}

#[test]
fn verify_reports_agreement() {
    let inst = ok(&["family", "sequal", "--n", "3", "--s", "2", "--k", "2"], "");
    let doc = json(&["verify"], &inst);
    let v = &doc["verification"];
    assert_eq!(v["passed"], true);
    assert_eq!(v["skipped"], 0);
    assert!(v["checked"].as_u64().unwrap() > 0);
}

#[test]
fn freeness_certificate_for_uniform_family() {
    let inst = ok(&["family", "binary", "--n", "6", "--s", "3"], "");
    let doc = json(&["freeness"], &inst);
    assert_eq!(doc["free_over_Z"], true);
}
