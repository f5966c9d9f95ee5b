use std::process::{Command, Output};

use serde_json::Value;

fn hamflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamflow")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = hamflow(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

#[test]
fn classify_mobius_ladder() {
    let (v, code) = json(&["classify", "--group", "Z6", "--conn", "1,5,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["label"], "MobiusLadder(n=3)");
    let text = String::from_utf8(hamflow(&["classify", "--group", "Z6", "--conn", "1,5,3"]).stdout).unwrap();
    assert!(text.contains("MobiusLadder(n=3)"));
}

#[test]
fn quotient_weird_case() {
    let (v, code) = json(&["quotient", "--group", "Z10", "--conn", "2,8,3,7"]);
    assert_eq!(code, 0);
    assert_eq!(v["F/H"], "Z_4");
    assert_eq!(v["E/H"], "Z_2");
    assert_eq!(v["verdict"], "MATCH");
}

#[test]
fn text_and_json_carry_the_same_values() {
    let args = ["quotient", "--group", "Z8", "--conn", "1,7,2,6"];
    let (v, _) = json(&args);
    let text = String::from_utf8(hamflow(&args).stdout).unwrap();
    for (k, val) in v.as_object().unwrap() {
        if let Value::String(s) = val {
            assert!(text.lines().any(|l| l.starts_with(k.as_str()) && l.trim_end().ends_with(s.as_str())), "{k}");
        }
    }
}

#[test]
fn invalid_input_exits_two_with_one_line() {
    for args in [
        vec!["classify", "--group", "Z6", "--conn", "1,3"],
        vec!["classify", "--group", "Q8", "--conn", "1"],
        vec!["construct", "--name", "Hstar", "--group", "Z3xZ4", "--conn", "(1,0),(2,0),(0,1),(0,3)", "--bind", "s=(1,0),t=(0,1)"],
        vec!["construct", "--name", "nope", "--group", "Z6", "--conn", "1,5"],
        vec!["dsl", "--expr", "(s,", "--group", "Z6", "--conn", "1,5"],
        vec!["frobnicate"],
        vec!["classify", "--group", "Z6", "--conn", "1,5", "--bogus"],
    ] {
        let out = hamflow(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("hamflow: error: invalid-input: "), "{err}");
    }
}

#[test]
fn construct_reports_hamiltonian_cycle() {
    let (v, code) = json(&[
        "construct", "--name", "Mobius2layers-H", "--group", "Z2xZ6", "--conn", "(0,3),(0,1),(0,5),(1,0)", "--bind",
        "s=(0,3),t=(0,1),u=(1,0)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "HamiltonianCycle");
    assert_eq!(v["length"], 12);
}

#[test]
fn catalog_examples_all_construct() {
    let (list, code) = json(&["construct", "--list"]);
    assert_eq!(code, 0);
    let entries = list["catalog"].as_array().unwrap();
    assert!(entries.len() >= 20);
    for e in entries {
        let name = e["name"].as_str().unwrap();
        let ex = e["example"].as_str().unwrap();
        let mut parts = ex.split(" --").map(|p| p.trim_start_matches("--"));
        let mut args = vec!["construct".to_string(), "--name".into(), name.into()];
        for p in parts.by_ref() {
            let (k, v) = p.split_once(' ').unwrap();
            args.push(format!("--{k}"));
            args.push(v.trim_matches('\'').to_string());
        }
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (v, code) = json(&args);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["verdict"], "HAMILTONIAN", "{name}");
    }
}

#[test]
fn dsl_expansion() {
    let (v, code) = json(&["dsl", "--expr", "(s^{|s|})", "--group", "Z7", "--conn", "1,6", "--bind", "s=1"]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "HamiltonianCycle");
}

#[test]
fn enumerate_counts() {
    let (v, code) = json(&["enumerate", "--group", "Z3xZ2", "--conn", "(1,0),(2,0),(0,1)", "--count-only"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 3);
    assert!(v.get("cycles").is_none());
}

#[test]
fn torus_and_membership_pass() {
    let (v, code) = json(&["torus", "--group", "Z14", "--conn", "2,12,3,11", "--t", "2", "--u", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["violations"], 0);
    let (v, code) = json(&["membership", "--group", "Z8", "--conn", "1,7,2,6", "--trials", "300"]);
    assert_eq!(code, 0);
    assert_eq!(v["discrepancies"], 0);
}

#[test]
fn membership_of_a_single_flow() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flow.json");
    // The triangle [0](1, 1, -2).
    let flow = r#"[{"tail":[0],"gen":[1],"coeff":1},{"tail":[1],"gen":[1],"coeff":1},{"tail":[0],"gen":[2],"coeff":-1}]"#;
    std::fs::write(&path, flow).unwrap();
    let out = hamflow(&["--json", "membership", "--group", "Z8", "--conn", "1,7,2,6", "--flow", path.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(v["by_weighting"], v["by_lattice"]);
}

#[test]
fn verify_report_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = hamflow(&["verify", "--max-order", "9", "--no-timing", "--seed", "5", "--jobs", "2", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read_to_string(path).unwrap()
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["summary"]["mismatched"], 0);
    assert!(v["verdicts"].as_array().unwrap().iter().all(|r| r["ms"] == 0));
}

#[test]
fn jobs_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hamflow"))
        .env("HAMFLOW_JOBS", "1")
        .args(["--json", "verify", "--max-order", "5", "--no-timing"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["jobs"], 1);
}
