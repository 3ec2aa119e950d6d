use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use arrcoh::catalog;
use arrcoh_cli::{parse_document, parse_input, serialize, InputDocument};

const BUILTINS: [&str; 6] = ["cu", "ncu", "ncnu", "braid:3", "braid:4", "boolean:3"];

fn arrcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrcoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn machine(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "machine"]);
    let out = arrcoh(&all);
    let doc = serde_json::from_slice(&out.stdout).expect("machine output is JSON");
    (doc, out.status.code().unwrap())
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("arrcoh-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn round_trip_is_identity_on_builtins() {
    for name in BUILTINS {
        for (a, b) in [(1, 1), (0, 2), (2, 1)] {
            let arr = catalog::builtin(name, a, b).unwrap();
            let text = serialize(&arr).unwrap();
            let back = parse_input(&text).unwrap();
            assert_eq!(
                (back.rank(), back.a(), back.b()),
                (arr.rank(), arr.a(), arr.b())
            );
            assert_eq!(
                back.subvarieties(),
                arr.subvarieties(),
                "{name} at ({a},{b})"
            );
            assert_eq!(serialize(&back).unwrap(), text, "{name} at ({a},{b})");
        }
    }
}

#[test]
fn fingerprint_ignores_layout() {
    let compact = r#"{"rank":1,"a":1,"b":1,"hypersurfaces":[{"chi":[1]},{"chi":[1],"u":["1/2"]}]}"#;
    let doc = parse_document(compact).unwrap();
    let spaced = doc.to_json();
    assert_ne!(compact, spaced);
    assert_eq!(
        parse_document(&spaced).unwrap().fingerprint(),
        doc.fingerprint()
    );
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"rank":1,"a":1,"b":1,"hypersurfaces":[{"chi":[1],"w":["0"]}]}"#;
    assert!(parse_document(text).is_err());
}

#[test]
fn poincare_of_ncu() {
    let (doc, code) = machine(&["poincare", "--example", "ncu"]);
    assert_eq!(code, 0);
    assert_eq!(doc["command"], "poincare");
    assert_eq!(doc["result"]["coefficients"], serde_json::json!([1, 7, 12]));
    assert_eq!(doc["input_fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn machine_output_is_stable() {
    for cmd in ["circuits", "layers", "betti", "verify"] {
        let first = arrcoh(&[cmd, "--example", "ncnu", "--format", "machine"]);
        let second = arrcoh(&[cmd, "--example", "ncnu", "--format", "machine"]);
        assert_eq!(first.stdout, second.stdout, "{cmd}");
    }
}

#[test]
fn file_and_example_agree() {
    let arr = catalog::builtin("ncu", 1, 1).unwrap();
    let path = scratch("ncu.json", &serialize(&arr).unwrap());
    let path = path.to_str().unwrap();
    let (from_file, _) = machine(&["betti", "--input", path]);
    let (from_example, _) = machine(&["betti", "--example", "ncu"]);
    assert_eq!(from_file, from_example);
    // a matching --ab is allowed
    let (again, code) = machine(&["betti", "--input", path, "--ab", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(again, from_file);
}

#[test]
fn conflicting_ab_is_an_error() {
    let arr = catalog::builtin("cu", 1, 1).unwrap();
    let path = scratch("cu.json", &serialize(&arr).unwrap());
    let out = arrcoh(&["betti", "--input", path.to_str().unwrap(), "--ab", "0,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("conflicts"));
}

#[test]
fn verify_passes_on_builtins() {
    for name in ["cu", "ncu", "ncnu", "braid:3"] {
        for ab in ["1,1", "0,2"] {
            let (doc, code) = machine(&["verify", "--example", name, "--ab", ab]);
            assert_eq!(code, 0, "{name} {ab}: {doc}");
            let checks = doc["checks"].as_array().unwrap();
            assert!(!checks.is_empty());
            assert!(checks.iter().all(|c| c["status"] == "PASS"));
        }
    }
}

#[test]
fn vg_counts_chambers() {
    let (doc, code) = machine(&["vg", "--example", "braid:3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["chambers"], 6);
}

#[test]
fn arnold_needs_a_braid_example() {
    let (doc, code) = machine(&["arnold", "--example", "braid:4", "--ab", "0,2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["betti"], serde_json::json!([1, 6, 11, 6]));
    assert_eq!(
        arrcoh(&["arnold", "--example", "cu"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_errors() {
    assert_eq!(
        arrcoh(&["poincare", "--example", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(arrcoh(&["poincare"]).status.code(), Some(2));
    let out = arrcoh(&["poincare", "--example", "cu", "--input", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
    let missing = arrcoh(&["poincare", "--input", "/nonexistent/arrangement.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad = scratch(
        "bad.json",
        r#"{"rank":1,"a":1,"b":1,"hypersurfaces":[{"chi":[0]}]}"#,
    );
    let out = arrcoh(&["charpoly", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_output_lists_checks() {
    let out = arrcoh(&["betti", "--example", "cu"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("betti ["));
    assert!(text.lines().any(|l| l.starts_with("PASS ")));
}

#[test]
fn document_struct_is_public() {
    let doc: InputDocument = parse_document(
        r#"{"rank":2,"a":0,"b":1,"hypersurfaces":[{"chi":[1,0]},{"chi":[0,1],"label":"y"}]}"#,
    )
    .unwrap();
    assert_eq!(doc.hypersurfaces[1].label.as_deref(), Some("y"));
    assert_eq!(doc.to_arrangement().unwrap().len(), 2);
}
