use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn koca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koca")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut all = args.to_vec();
    all.extend(["--report", path.to_str().unwrap()]);
    let o = koca(&all);
    let text = std::fs::read_to_string(&path).expect("report written");
    (code(&o), serde_json::from_str(&text).unwrap())
}

fn checks(r: &Value) -> Vec<&Value> {
    r["suites"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|s| s["checks"].as_array().unwrap())
        .collect()
}

#[test]
fn boolean_two_passes() {
    let (c, r) = report(&["check", "--structure", "boolean:2"]);
    assert_eq!(c, 0);
    assert_eq!(r["passed"], true);
    assert_eq!(r["caps"]["max_enum"], 16);
    assert_eq!(r["structure"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn mutated_file_fails_with_witness() {
    let (c, r) = report(&["check", "--structure", &data("broken_k.json")]);
    assert_eq!(c, 1);
    let k = checks(&r).into_iter().find(|c| c["name"].as_str().unwrap().ends_with("/K")).unwrap();
    assert_eq!(k["status"], "fail");
    assert!(k["witness"].is_array());
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(code(&koca(&["frobnicate"])), 2);
}

#[test]
fn missing_structure_is_a_usage_error() {
    assert_eq!(code(&koca(&["check"])), 2);
}

#[test]
fn malformed_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"kind\": \"koca\", \"elements\": [").unwrap();
    assert_eq!(code(&koca(&["check", "--structure", p.to_str().unwrap()])), 2);
    std::fs::write(&p, "{\"kind\": \"lattice\", \"terms\": [\"t\"], \"stacks\": [], \"pole\": [[\"t\", \"p\"]]}").unwrap();
    assert_eq!(code(&koca(&["check", "--structure", p.to_str().unwrap()])), 2);
}

#[test]
fn exhaustive_beyond_the_cap_is_a_resource_error() {
    let o = koca(&["tripos", "--structure", "boolean:2", "--index-size", "7", "--exhaustive"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let texts: Vec<String> = (0..2)
        .map(|i| {
            let p = dir.path().join(format!("{i}.json"));
            let args = ["tripos", "--structure", "boolean:1", "--index-size", "2", "--samples", "50", "--seed", "7"];
            let mut all = args.to_vec();
            all.extend(["--report", p.to_str().unwrap()]);
            assert_eq!(code(&koca(&all)), 0);
            std::fs::read_to_string(&p).unwrap()
        })
        .collect();
    assert_eq!(texts[0], texts[1]);
    assert!(texts[0].contains("\"seed\": 7"));
}

#[test]
fn translated_structures_load_and_pass() {
    let dir = tempfile::tempdir().unwrap();
    let aks = dir.path().join("aks.json");
    let back = dir.path().join("koca.json");
    let o = koca(&[
        "translate",
        "--structure",
        "boolean:1",
        "--direction",
        "koca2aks",
        "--verify",
        "--output",
        aks.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = koca(&[
        "translate",
        "--structure",
        aks.to_str().unwrap(),
        "--direction",
        "aks2koca",
        "--output",
        back.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&koca(&["check", "--structure", back.to_str().unwrap()])), 0);
    assert_eq!(code(&koca(&["check", "--structure", aks.to_str().unwrap()])), 0);
}

#[test]
fn wrong_direction_is_a_usage_error() {
    let o = koca(&["translate", "--structure", "boolean:1", "--direction", "aks2koca"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn derivation_file_and_theory() {
    let (_, r) = report(&[
        "homega",
        "--structure",
        "boolean:2",
        "--interp",
        &data("z3.json"),
        "--check",
        &data("z3.ho"),
    ]);
    let all = checks(&r);
    let get = |n: &str| all.iter().find(|c| c["name"] == n).unwrap();
    assert_eq!(get("id")["status"], "pass");
    assert_eq!(get("generalize")["status"], "pass");
    assert!(get("identity")["note"].as_str().unwrap().starts_with("realized by"));
    assert_eq!(get("falsum")["note"], "no realizer in Φ");
}

#[test]
fn peano_on_a_cyclic_successor_reports_the_wraparound() {
    let (c, r) = report(&["homega", "--structure", "boolean:2", "--interp", &data("z3.json"), "--pa"]);
    assert_eq!(c, 1);
    let bad: Vec<&str> = checks(&r)
        .into_iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(bad, ["succ-not-zero"]);
}

#[test]
fn peano_on_a_saturating_successor_passes() {
    let o = koca(&["homega", "--structure", "boolean:2", "--interp", &data("saturating3.json"), "--pa"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn roundtrip_and_lattice_files() {
    assert_eq!(code(&koca(&["roundtrip", "--structure", "boolean:1"])), 0);
    assert_eq!(code(&koca(&["check", "--structure", &data("two_by_two.json")])), 0);
    assert_eq!(code(&koca(&["check", "--structure", &data("boolean1_quadruple.json")])), 0);
}

#[test]
fn homega_without_a_task_is_a_usage_error() {
    assert_eq!(code(&koca(&["homega", "--structure", "boolean:1"])), 2);
}
