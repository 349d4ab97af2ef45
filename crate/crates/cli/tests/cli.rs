use std::path::PathBuf;
use std::process::{Command, Output};

use facering::complex::SimplicialComplex;
use facering::corpus;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_facering"))
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> (Output, Value) {
    let out = bin().args(args).output().expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, json)
}

#[test]
fn bundled_files_match_corpus() {
    for (name, c) in corpus::all() {
        let text = std::fs::read_to_string(corpus_dir().join(format!("{name}.json"))).unwrap();
        assert_eq!(SimplicialComplex::from_json(&text).unwrap(), c, "{name}");
    }
}

#[test]
fn hilbert_octahedron_from_file() {
    let path = corpus_dir().join("octahedron.json");
    let (out, v) = run(&["hilbert", "--complex", path.to_str().unwrap(), "--seeds", "2"]);
    assert!(out.status.success());
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"][0]["detail"], serde_json::json!([1, 3, 3, 1]));
    assert_eq!(v["seeds"], serde_json::json!([1, 2]));
    assert_eq!(v["field"]["characteristic"], 2);
}

#[test]
fn reports_are_reproducible() {
    let args = ["psi-crosscheck", "--complex", "polygon5", "--seeds", "5,6"];
    let (a, _) = run(&args);
    let (b, _) = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn minor_identities_to_order_four() {
    let (out, v) = run(&["verify-identities", "--family", "thm86", "--max-order", "4"]);
    assert!(out.status.success());
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["N2", "P2", "Q3", "N4", "P4"]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["method"] == "exact"));
}

#[test]
fn polygon_suite_small_range() {
    let (out, v) = run(&["polygon-suite", "--m-range", "3..6", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(v["checks"].as_array().unwrap().len(), 4 * (3 * 3 + 1));
}

#[test]
fn lefschetz_table() {
    let (out, v) = run(&["lefschetz", "--complex", "polygon4", "--property", "wlp", "--seeds", "2"]);
    assert!(out.status.success());
    let table = v["checks"][0]["detail"].as_array().unwrap();
    assert!(table.iter().all(|r| r["rank"] == r["source_dim"].as_u64().unwrap().min(r["target_dim"].as_u64().unwrap())));
}

#[test]
fn anisotropy_and_text_output() {
    let out = bin().args(["anisotropy", "--complex", "octahedron", "--format", "text"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS u = x1 "));
    assert!(text.trim_end().ends_with("checks passed"));
}

#[test]
fn out_file_and_timings() {
    let dir = std::env::temp_dir().join(format!("facering-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = bin()
        .args(["hilbert", "--complex", "triangle", "--timings", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["timings"].as_array().unwrap().len(), 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["hilbert"],
        vec!["hilbert", "--complex", "nowhere"],
        vec!["hilbert", "--complex", "triangle", "--seeds", "1"],
        vec!["hilbert", "--complex", "triangle", "--char", "4"],
        vec!["anisotropy", "--complex", "triangle", "--char", "3"],
        vec!["verify-identities", "--family", "prop57", "--complex", "polygon5"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn odd_characteristic_crosscheck() {
    let (out, v) = run(&["psi-crosscheck", "--complex", "octahedron", "--char", "3"]);
    assert!(out.status.success());
    assert_eq!(v["checks"][0]["name"], "facet signs path-independent");
    assert_eq!(v["field"]["characteristic"], 3);
}
