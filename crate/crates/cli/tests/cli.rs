use std::process::{Command, Output};

use serde_json::Value;

const CHAIN2: &str = r#"{"elements":["a","b"],"leq":[["a","b"]]}"#;
const Z6: &str = r#"{"ring":{"kind":"modular","n":6},"degrees":[0,0],"modules":[{"gens":1}],"differentials":[]}"#;

fn tts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tts")).args(args).output().expect("tts runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn cbrank_of_chain2() {
    let out = tts(&["spectral", "cbrank", CHAIN2]);
    assert!(out.status.success());
    assert_eq!(json_of(&out), serde_json::json!({"rank": 2}));
}

#[test]
fn small_support_of_z6_from_file() {
    let dir = std::env::temp_dir().join(format!("tts-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z6.json");
    std::fs::write(&path, Z6).unwrap();
    let out = tts(&["support", "small", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["primes"], serde_json::json!(["(2)", "(3)"]));
    assert_eq!(v["generic"], false);
    assert_eq!(v["cofinite"], false);
}

#[test]
fn assembly_of_chain2_lists_four_nuclei() {
    let out = tts(&["frames", "assembly", CHAIN2]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["count"], 4);
    assert_eq!(v["nuclei"].as_array().unwrap().len(), 4);
    assert_eq!(v["boolean"], true);
}

#[test]
fn thomason_sets_are_sorted_element_lists() {
    let v = json_of(&tts(&["spectral", "thomason", CHAIN2]));
    assert_eq!(v, serde_json::json!([[], ["b"], ["a", "b"]]));
}

#[test]
fn boolean_and_essential_on_chain2() {
    assert_eq!(json_of(&tts(&["frames", "boolean", CHAIN2]))["boolean"], false);
    let v = json_of(&tts(&["frames", "essential", CHAIN2]));
    assert_eq!(v["min_primes"], serde_json::json!(["{}"]));
    assert_eq!(v["essential"], serde_json::json!(["{}"]));
}

#[test]
fn malformed_json_exits_one_with_location() {
    let out = tts(&["spectral", "cbrank", "{\"elements\": [1,"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = json_of(&out)["error"].as_str().unwrap().to_string();
    assert!(msg.contains("line 1"), "{msg}");
    assert!(msg.contains("column"), "{msg}");
}

#[test]
fn missing_file_exits_one() {
    let out = tts(&["spectral", "cbrank", "/nonexistent/poset.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["error"].is_string());
}

#[test]
fn oversized_poset_exits_two_naming_the_bound() {
    let out = tts(&["spectral", "cbrank", "--max-poset", "1", CHAIN2]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["bound"], "max-poset");
}

#[test]
fn precondition_failure_is_structured() {
    let out = tts(&["support", "localize", "--invert", "2", Z6]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["error"].is_string());
}

#[test]
fn tsv_output_is_tabular() {
    let out = tts(&["support", "small", "--format", "tsv", Z6]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "primes\t[\"(2)\",\"(3)\"]"), "{text}");
}

#[test]
fn ring_datum_round_trips_through_eta() {
    let datum = tts(&["axioms", "ring", r#"{"kind":"modular","n":6}"#]);
    assert!(datum.status.success());
    let text = String::from_utf8(datum.stdout).unwrap();
    let v = json_of(&tts(&["axioms", "eta", "--samples", "5", &text]));
    assert_eq!(v["result"], "factorization");
    assert_eq!(v["assembly_agrees"], true);
}

#[test]
fn reports_are_deterministic() {
    let args = ["axioms", "eta", "--seed", "7", "--samples", "5"];
    let datum = String::from_utf8(tts(&["axioms", "ring", r#"{"kind":"modular","n":30}"#]).stdout).unwrap();
    let mut full: Vec<&str> = args.to_vec();
    full.push(&datum);
    assert_eq!(tts(&full).stdout, tts(&full).stdout);
}

#[test]
fn unknown_module_fields_are_rejected() {
    let bad = r#"{"ring":{"kind":"integers"},"degrees":[0,0],"modules":[{"gens":1,"rel":[[6]]}],"differentials":[]}"#;
    let out = tts(&["support", "small", bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["error"].as_str().unwrap().contains("rel"));
}

#[test]
fn localized_torsion_keeps_the_surviving_prime() {
    let c = r#"{"ring":{"kind":"integers","inverted":[2]},"degrees":[0,0],"modules":[{"gens":1,"relations":[[6]]}],"differentials":[]}"#;
    let v = json_of(&tts(&["support", "small", c]));
    assert_eq!(v["primes"], serde_json::json!(["(3)"]));
    assert_eq!(v["generic"], false);
}
