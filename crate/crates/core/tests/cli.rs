use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gfkit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gfkit")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scratch_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("gfkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn gf_prints_b_form_and_verdict() {
    let (code, out, _) = gfkit(&["gf", &data("tetrahedral.gfk")]);
    assert_eq!(code, 0);
    assert!(out.contains("b: 1 3 6 10"), "{out}");
    assert!(out.contains("pass (verified to N=25)"), "{out}");
}

#[test]
fn gf_json_has_expected_keys() {
    let (code, out, _) = gfkit(&["--format", "json", "gf", &data("tetrahedral.gfk")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["b"], serde_json::json!(["1", "3", "6", "10"]));
    assert_eq!(v["verified"], Value::Bool(true));
    assert_eq!(v["numerator"], serde_json::json!([["0", "0", "1"]]));
    assert_eq!(v["denominator"].as_array().unwrap().len(), 4);
}

#[test]
fn gf_handles_every_system_kind() {
    for file in [
        "trivial.gfk",
        "lecture_hall4.gfk",
        "rational_general.gfk",
        "lhv_equal.gfk",
        "powers_of_two.gfk",
    ] {
        let (code, out, err) = gfkit(&["gf", &data(file)]);
        assert_eq!(code, 0, "{file}: {out}{err}");
        assert!(out.contains("pass"), "{file}: {out}");
    }
    for file in [
        "lecture_hall4.gfk",
        "lhv_equal.gfk",
        "powers_of_two.gfk",
        "tetrahedral.gfk",
    ] {
        let (code, out, err) = gfkit(&["gf2", "--trunc", "15", &data(file)]);
        assert_eq!(code, 0, "{file}: {out}{err}");
    }
}

#[test]
fn wrong_claim_exits_two_at_first_difference() {
    let (code, out, _) = gfkit(&["verify", &data("trivial.gfk"), "--claim", "2", "--trunc", "3"]);
    assert_eq!(code, 2);
    assert!(
        out.contains("mismatch at q^1: oracle counts 1, generating function gives 0"),
        "{out}"
    );

    let (code, out, _) = gfkit(&[
        "--format",
        "json",
        "verify",
        &data("tetrahedral.gfk"),
        "--claim",
        "1,3,6,11",
    ]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["pass"], Value::Bool(false));
    assert_eq!(v["mismatch"]["exponent"], serde_json::json!(["10", "0"]));
}

#[test]
fn diagnostics_carry_line_and_column() {
    let (code, _, err) = gfkit(&["gf", &data("bad_semantic.gfk")]);
    assert_eq!(code, 1);
    assert!(err.contains("bad_semantic.gfk:2:7"), "{err}");

    let path = scratch_file("syntax.gfk", "k=2\nL1 >= 2 L2 +\n");
    let (code, _, err) = gfkit(&["gf", &path]);
    assert_eq!(code, 1);
    assert!(err.contains("syntax.gfk:2:"), "{err}");
    assert!(err.contains("syntax error"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gfkit(&[]).0, 1);
    assert_eq!(gfkit(&["gf"]).0, 1);
    assert_eq!(gfkit(&["gf", "/nonexistent.gfk"]).0, 1);
    assert_eq!(gfkit(&["--help"]).0, 0);
}

#[test]
fn theta_both_directions() {
    let (code, out, _) = gfkit(&["theta", &data("tetrahedral.gfk"), "--lambda", "4,3,2,1"]);
    assert_eq!((code, out.trim()), (0, "0,0,0,10"));
    let (code, out, _) = gfkit(&["theta", &data("tetrahedral.gfk"), "--parts", "0,0,0,10"]);
    assert_eq!((code, out.trim()), (0, "4,3,2,1"));
    let (code, _, err) = gfkit(&["theta", &data("tetrahedral.gfk"), "--lambda", "0,0,1,1"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn inverse_round_trips_through_the_parser() {
    let (code, out, _) = gfkit(&["inverse", "--seq", "2,2,4,4"]);
    assert_eq!(code, 0);
    let body: String = out
        .lines()
        .filter(|l| !l.starts_with("verified"))
        .map(|l| format!("{l}\n"))
        .collect();
    let path = scratch_file("inverse.gfk", &body);
    let (code, out, _) = gfkit(&["verify", &path, "--claim", "2,2,4,4"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn expand_and_infer() {
    let (code, out, _) = gfkit(&["expand", &data("trivial.gfk"), "--trunc", "3"]);
    assert_eq!((code, out.trim()), (0, "1 1 1 1"));
    let (code, out, _) = gfkit(&["infer", &data("lecture_hall4.gfk"), "--trunc", "30"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "1:1 3:1 5:1 7:1");
}
