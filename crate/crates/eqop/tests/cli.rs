use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn eqop(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eqop")).args(args).env_remove("EQOP_BUDGET").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let (code, out, err) = eqop(&all);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn validate_accepts_the_fixtures() {
    for name in ["interval.json", "quartic.json", "sign.json"] {
        let v = json(&["validate", &fixture(name)]);
        assert_eq!(v["valid"], true, "{name}");
    }
}

#[test]
fn canonical_output_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ws.json");
    std::fs::copy(fixture("interval.json"), &path).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(eqop(&["validate", "--write", p]).0, 0);
    let first = std::fs::read(&path).unwrap();
    let (_, printed, _) = eqop(&["validate", "--canonical", p]);
    assert_eq!(printed.as_bytes(), &first[..]);
    assert_eq!(eqop(&["validate", "--write", p]).0, 0);
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn classify_golden_fixture() {
    let v = json(&["classify", "--operad-map", &fixture("interval.json"), "--map", "eta_pair_to_interval"]);
    assert_eq!(v["verdicts"]["we"], false);
    assert_eq!(v["verdicts"]["fib"], false);
    assert!(v["witnesses"]["local_we"].is_string());
    let v = json(&["classify", "--operad-map", &fixture("interval.json"), "--map", "eta_to_interval"]);
    assert_eq!(v["verdicts"]["we"], true);
    assert_eq!(v["verdicts"]["fib"], false);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema":"eqop/1","groups":{"g":{"order":1,"mul":[[1]]}}}"#).unwrap();
    let (code, _, err) = eqop(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("/groups/g"), "{err}");
    let sign = fixture("sign.json");
    assert_eq!(eqop(&["classify", "-w", &sign, "--family", "graph", "--bound-arity", "2"]).0, 3);
    let interval = fixture("interval.json");
    assert_eq!(eqop(&["lift", "-w", &interval, "--map", "eta_to_interval", "--budget", "1"]).0, 4);
    let out = Command::new(env!("CARGO_BIN_EXE_eqop"))
        .args(["lift", "-w", &interval, "--map", "eta_to_interval"])
        .env("EQOP_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(eqop(&["no-such-command"]).0, 64);
    assert_eq!(eqop(&["--help"]).0, 0);
}

#[test]
fn enough_units_are_enforced() {
    let v = json(&["family", "-w", &fixture("sign.json"), "--name", "deficient"]);
    assert_eq!(v["enough_units"], false);
    assert_eq!(v["witness"]["arity"], 0);
    let v = json(&["family", "--group", "z2", "--constructor", "graph"]);
    assert_eq!(v["enough_units"], true);
    let (code, _, err) = eqop(&["classify", "-w", &fixture("sign.json"), "--family", "deficient"]);
    assert_ne!(code, 0);
    assert!(err.contains("enough units"));
}

#[test]
fn generated_family_from_flags() {
    let v = json(&["family", "--group", "z2", "--constructor", "generated", "--generator", "1:1", "--bound-arity", "1"]);
    assert_eq!(v["arities"][1]["members"].as_array().unwrap().len(), 2);
    assert_eq!(v["arities"][0]["members"].as_array().unwrap().len(), 1);
}

#[test]
fn free_fixed_pi0_lift() {
    let v = json(&["free", "-w", &fixture("quartic.json")]);
    assert_eq!(v["total"], 6);
    let v = json(&["fixed", "-w", &fixture("sign.json"), "--operad", "connected", "--subgroup", "all"]);
    assert_eq!(v["colors"], serde_json::json!(["b"]));
    let v = json(&["pi0", "-w", &fixture("sign.json"), "--operad", "connected"]);
    assert_eq!(v["iso_classes"].as_array().unwrap().len(), 1);
    let v = json(&["lift", "-w", &fixture("interval.json"), "--map", "eta_to_interval", "--family", "all"]);
    assert_eq!(v["C1+C2"]["holds"], false);
    assert_eq!(v["TC1"]["holds"], false);
}

#[test]
fn amalgamate_and_attach() {
    let v = json(&["amalgamate", "-w", &fixture("interval.json")]);
    assert_eq!(v["interval"], true);
    assert_eq!(v["associative"], true);
    let v = json(&["amalgamate"]);
    assert_eq!(v["interval"], true);
    let v = json(&["attach", "-w", &fixture("sign.json"), "--operad", "connected", "--subgroup", "all", "--color", "b"]);
    assert_eq!(v["verdicts"]["we"], true);
    let v = json(&["attach", "-w", &fixture("sign.json"), "--operad", "connected", "--subgroup", "all", "--colors-only"]);
    assert_eq!(v["verdicts"]["we"], false);
}

#[test]
fn suite_reports_and_is_deterministic() {
    let args = ["suite", "--trials", "8", "--seed", "3", "--group", "z2"];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a, b);
    assert_eq!(a["passed"], true);
    assert_eq!(a["axioms"]["checks"]["we_iff_dwyer_kan"]["passed"], 8);
}
