use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobenius")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn machine(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "machine"]);
    let out = run(&all);
    (serde_json::from_slice(&out.stdout).unwrap_or(Value::Null), out.status.code().unwrap())
}

/// Compares against the golden file; `UPDATE_GOLDEN=1` rewrites it instead.
fn golden(name: &str, actual: &str) {
    let path = fixture(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

const CASES: &[(&str, &[&str], i32)] = &[
    ("example_3_3", &[], 0),
    ("example_3_4", &[], 0),
    ("example_3_5", &[], 0),
    ("example_3_6", &[], 0),
    ("remark_3_7_i", &["--allow-subset"], 0),
    ("remark_3_7_ii", &[], 3),
];

#[test]
fn analyze_matches_golden_files() {
    for (name, flags, code) in CASES {
        let input = fixture(&format!("{name}.json"));
        let input = input.to_str().unwrap();
        for (format, ext) in [("machine", "json"), ("human", "txt")] {
            let mut args = vec!["analyze", "--input", input, "--format", format];
            args.extend(*flags);
            let out = run(&args);
            assert_eq!(out.status.code(), Some(*code), "{name} {format}");
            golden(&format!("{name}.analyze.{ext}"), &stdout(&out));
        }
    }
}

#[test]
fn machine_output_is_idempotent() {
    let dir = std::env::temp_dir().join(format!("frobenius-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    for (name, flags, _) in CASES {
        let input = fixture(&format!("{name}.json"));
        let mut args = vec!["analyze", "--input", input.to_str().unwrap(), "--format", "machine"];
        args.extend(*flags);
        let first = stdout(&run(&args));
        let again = dir.join(format!("{name}.out.json"));
        fs::write(&again, &first).unwrap();
        let mut args = vec!["analyze", "--input", again.to_str().unwrap(), "--format", "machine"];
        args.extend(*flags);
        assert_eq!(stdout(&run(&args)), first, "{name}");
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn analyze_values() {
    let (doc, code) = machine(&["analyze", "-g", "4", "-g", "6", "-g", "7"]);
    assert_eq!(code, 0);
    assert_eq!(doc["frobenius"]["g"], json!(["9"]));
    assert_eq!(doc["conductor"], json!([["10"]]));
    assert_eq!(doc["gaps"], json!(["1", "2", "3", "5", "9"]));

    let (doc, code) = machine(&["analyze", "-g", "1,3", "-g", "3,2", "-g", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["frobenius"]["g"], json!(["2", "1"]));
    assert_eq!(doc["conductor"], json!([["3", "2"], ["3", "3"]]));

    let (doc, code) = machine(&["analyze", "--input", fixture("remark_3_7_ii.json").to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(doc["conditions"]["doublestar"][1]["target"], json!(["22"]));
    assert_eq!(doc["formula"]["value"], json!(["33"]));
    assert_eq!(doc["formula"]["witness"], json!(["0", "0", "3"]));

    let (doc, code) = machine(&["analyze", "--input", fixture("remark_3_7_i.json").to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(doc["conditions"]["star_violation"], json!(3));
    let (doc, _) = machine(&["analyze", "--allow-subset", "--input", fixture("remark_3_7_i.json").to_str().unwrap()]);
    assert_eq!(doc["frobenius"]["g"], json!(["9"]));
    assert_eq!(doc["frobenius"]["minimal"], json!(false));
    assert_eq!(doc["frobenius_number"], json!("5"));
}

#[test]
fn conditions_failure_names_the_target() {
    let out = run(&["analyze", "-g", "8", "-g", "10", "-g", "11"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("(**)") && err.contains("(22)"), "{err}");
}

#[test]
fn member_command() {
    let (r, code) = machine(&["member", "-g", "4", "-g", "6", "-g", "7", "9"]);
    assert_eq!(code, 0);
    assert_eq!(r["in_semigroup"], json!(false));
    assert_eq!(r["coefficients"], json!(["-1", "1", "1"]));

    let (r, _) = machine(&["member", "-g", "4", "-g", "6", "-g", "7", "0"]);
    assert_eq!(r["in_semigroup"], json!(true));

    let ex34 = fixture("example_3_4.json");
    let (r, _) = machine(&["member", "--input", ex34.to_str().unwrap(), "10,14"]);
    assert_eq!(r["in_group"], json!(true));
    assert_eq!(r["in_semigroup"], json!(false));
    assert_eq!(r["beyond_frobenius"], json!(false));

    // conditions fail, so the brute-force path answers
    let (r, code) = machine(&["member", "-g", "8", "-g", "10", "-g", "11", "33"]);
    assert_eq!(code, 0);
    assert_eq!(r["method"], json!("brute_force"));
    assert_eq!(r["coefficients"], json!(["0", "0", "3"]));
}

#[test]
fn dioph_command() {
    let (r, code) = machine(&["dioph", "-g", "4", "-g", "6", "-g", "7", "13"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], json!("solvable_by_cone"));
    let (r, _) = machine(&["dioph", "-g", "4", "-g", "6", "-g", "7", "9"]);
    assert_eq!(r["status"], json!("no_solution"));
    let (r, _) = machine(&["dioph", "-g", "4", "-g", "6", "3"]);
    assert_eq!(r["status"], json!("lattice_infeasible"));
}

#[test]
fn curve_and_quasi_commands() {
    let out = run(&["curve", "-n", "4", "-m", "6,7"]);
    assert_eq!(out.status.code(), Some(0));
    golden("curve_4_6_7.txt", &stdout(&out));
    let (r, _) = machine(&["curve", "-n", "4", "-m", "6", "-m", "7"]);
    assert_eq!(r["generators"], json!(["4", "6", "13"]));
    assert_eq!(r["conductor"], json!("16"));
    assert_eq!(r["gap_count"], json!("8"));

    let (r, code) = machine(&["quasi", "-n", "2", "-m", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(r["d"], json!(["4", "2"]));
    assert_eq!(r["g"], json!(["-1", "-1"]));

    let (r, _) = machine(&["quasi", "-n", "4", "-m", "6", "-m", "7"]);
    assert_eq!(r["generators"], json!([["4"], ["6"], ["13"]]));

    assert_eq!(run(&["curve", "-n", "4", "-m", "6,8"]).status.code(), Some(2));
    assert_eq!(run(&["quasi", "-n", "2", "-m", "2,2"]).status.code(), Some(2));
}

#[test]
fn verify_command() {
    let ex36 = fixture("example_3_6.json");
    let out = run(&["verify", "--input", ex36.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    golden("example_3_6.verify.txt", &stdout(&out));

    let (r, code) = machine(&["verify", "-g", "4", "-g", "6", "-g", "7", "--margin", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r["theorem1"]["holds"], json!(true));
    assert_eq!(r["conductor"]["conductor"], json!([["10"]]));

    let ex35 = fixture("example_3_5.json");
    let (r, code) = machine(&["verify", "--input", ex35.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["conductor"]["covered"], json!(true));

    assert_eq!(run(&["verify", "-g", "8", "-g", "10", "-g", "11"]).status.code(), Some(3));
}

#[test]
fn invalid_input_exits_with_2() {
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "-g", "4", "-g", "x"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "-g", "1,2", "-g", "2,4", "-g", "1,1"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--input", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["member", "-g", "4", "-g", "6", "1,2"]).status.code(), Some(2));
}
