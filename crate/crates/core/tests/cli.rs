use std::process::Command;

use kksoergel::cli::run;
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("kksoergel").chain(args.iter().copied()).chain(["--json"]));
    let value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, value)
}

#[test]
fn coinvariants_of_a1() {
    let (code, v) = json(&["coinvariants", "--preset", "A1", "--field", "Q"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["expected"], 2);
    assert_eq!(v["pass"], true);
    assert_eq!(v["datum"]["cartan"], serde_json::json!([[2]]));
    assert_eq!(v["field"], "Q");
    assert_eq!(v["version"], kksoergel::VERSION);
}

#[test]
fn steinberg_determinant_of_a1() {
    let (code, v) = json(&["steinberg", "--preset", "A1"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["det"], "y1 - y1^-1");
    assert_eq!(v["certificate"]["holds"], true);
    assert_eq!(v["basis"].as_array().unwrap().len(), 2);
}

#[test]
fn catalog_of_a1_over_f2() {
    let (code, v) = json(&["catalog", "--preset", "A1", "--field", "Fp:2"]);
    assert_eq!(code, 0);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["w"], "D_e");
    assert_eq!(entries[0]["character"], serde_json::json!({"e": 1}));
    assert_eq!(entries[1]["w"], "D_s1");
    assert_eq!(entries[1]["character"], serde_json::json!({"e": 1, "s1": 1}));
}

#[test]
fn bs_decompose_schema() {
    let (code, v) = json(&["bs-decompose", "--preset", "A1", "--word", "1,1", "--field", "Q", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["word"], serde_json::json!([1, 1]));
    assert_eq!(v["dim"], 4);
    assert_eq!(v["seed"], 3);
    let summands = v["summands"].as_array().unwrap();
    assert_eq!(summands.len(), 1);
    assert_eq!(summands[0]["iso_class"], "D_s1");
    assert_eq!(summands[0]["mult"], 2);
    assert_eq!(summands[0]["dim"], 2);
    assert_eq!(summands[0]["character"], serde_json::json!({"e": 1, "s1": 1}));
}

#[test]
fn gkm_report_schema() {
    let (code, v) = json(&["tau-check", "--preset", "A2", "--field", "Fp:3", "--order", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["violations"], serde_json::json!([]));
    assert_eq!(v["images"].as_array().unwrap().len(), 3);

    let (code, v) = json(&["psi-expand", "--preset", "A1", "--values", "1; y1"]);
    assert_eq!(code, 0);
    assert_eq!(v["in_image"], false);
    assert_eq!(v["failure"]["w"], "s1");
    assert_eq!(v["failure"]["coroot"], serde_json::json!([2]));
}

#[test]
fn checks_pass_on_small_presets() {
    for args in [
        &["psi", "--preset", "B2", "--field", "Fp:2"][..],
        &["braid-check", "--preset", "A2"],
        &["bimodule-check", "--preset", "A1xA1", "--max-length", "2"],
        &["bimodule-check", "--preset", "B2", "--word", "s1,s2"],
        &["coinvariants", "--preset", "A2", "--field", "Fp:3"],
        &["accept", "--criteria", "1,11"],
    ] {
        let (code, v) = json(args);
        assert_eq!((code, &v["pass"]), (0, &Value::Bool(true)), "{args:?}");
    }
}

#[test]
fn cartan_of_category_of_a1() {
    let (code, v) = json(&["cartan-of-category", "--preset", "A1"]);
    assert_eq!(code, 0);
    assert_eq!(v["matrix"], serde_json::json!([[1, 1], [1, 2]]));
}

#[test]
fn datum_files_carry_a_field() {
    let dir = std::env::temp_dir().join(format!("kksoergel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g2.json");
    std::fs::write(&path, r#"{"cartan": [[2, -1], [-3, 2]], "field": {"kind": "Fp", "p": 2}}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = json(&["tau-check", "--datum", p, "--order", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["field"], "Fp:2");
    assert_eq!(v["datum"]["preset"], Value::Null);
    let (_, v) = json(&["tau-check", "--datum", p, "--order", "1", "--field", "Q"]);
    assert_eq!(v["field"], "Q");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_and_exit_codes() {
    let (code, v) = json(&["psi", "--preset", "A1", "--frobnicate"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "UsageError");
    let (code, v) = json(&["psi", "--preset", "A1", "--field", "Fp:6"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "NotPrime");
    let (code, v) = json(&["psi", "--datum", "/nonexistent/datum.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Io");
    let (code, v) = json(&["bs-decompose", "--preset", "A2", "--word", "1,3"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Parse");
    let (code, v) = json(&["psi-expand", "--preset", "A1", "--values", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Parse");
}

#[test]
fn output_is_deterministic() {
    let args = ["kksoergel", "bs-decompose", "--preset", "B2", "--word", "1,2,1", "--field", "Fp:3", "--json"];
    let a = run(args);
    let b = run(args);
    assert_eq!(a, b);
    let text = run(&args[..args.len() - 1]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.contains("iso_class"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_kksoergel");
    let ok = Command::new(bin).args(["coinvariants", "--preset", "A1", "--json"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let bare = Command::new(bin).output().unwrap();
    assert_eq!(bare.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bare.stdout).contains("Usage"));
    let bad = Command::new(bin).args(["steinberg", "--preset", "A9"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
}
