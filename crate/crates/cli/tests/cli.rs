use std::path::PathBuf;
use std::process::Command;

use cmonv_cli::{run, Output};

fn cmonv(args: &[&str]) -> Output {
    run(std::iter::once("cmonv").chain(args.iter().copied()))
}

fn repo(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel).display().to_string()
}

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel).display().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    let h = cmonv(&["--help"]);
    assert_eq!(h.code, 0);
    assert!(h.stdout.contains("filtration"));
    assert_eq!(cmonv(&["--version"]).code, 0);
}

#[test]
fn usage_errors_exit_one() {
    for args in [&["--nmax", "0", "axioms"][..], &["--nmax", "5", "axioms"], &["--field", "f4", "axioms"], &["frobnicate"], &[]] {
        let o = cmonv(args);
        assert_eq!(o.code, 1, "{args:?}: {}", o.stderr);
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn unknown_names_are_errors() {
    let o = cmonv(&["filtration", "--x", "nope", "--h", "gen-cof-unit"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("unknown monoid"), "{}", o.stderr);
    let o = cmonv(&["filtration", "--x", "unit", "--h", "gen-cof-1-3"]);
    assert_eq!(o.code, 1);
}

#[test]
fn validate_reports_bad_fixtures() {
    let o = cmonv(&["validate", &repo("fixtures/square-zero-q.json"), &repo("fixtures/square-zero-f2.json")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.lines().count(), 2);
    let o = cmonv(&["validate", &data("bad-dd.json")]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("complexes.C") && o.stderr.contains("degree 2"), "{}", o.stderr);
    assert_eq!(cmonv(&["validate", &data("missing.json")]).code, 1);
}

#[test]
fn filtration_on_a_generating_cofibration() {
    let o = cmonv(&["--field", "f2", "--nmax", "4", "filtration", "--x", "unit", "--h", "gen-cof-2-3"]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.ends_with("verdicts: match\n"));
    assert!(!o.stdout.contains("FAIL"));
}

#[test]
fn fixture_monoids_are_usable_by_name() {
    for field in ["q", "f2"] {
        let o = cmonv(&[
            "--field",
            field,
            "--fixtures-dir",
            &repo("fixtures"),
            "filtration",
            "--x",
            "dual-numbers",
            "--h",
            "attach-2",
            "--g",
            "zero",
        ]);
        assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    }
}

#[test]
fn expected_char_p_failures_still_match() {
    let o = cmonv(&["--field", "f2", "--format", "json", "axioms"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let doc: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc["verdict"], "match");
    assert_eq!(doc["command"], "axioms");
    let strong = doc["reports"].as_array().unwrap().iter().find(|r| r["axiom"] == "strong-cmon").unwrap();
    assert!(strong["cells"].as_array().unwrap().iter().any(|c| c["verdict"] == "fail"));
}

#[test]
fn json_is_deterministic() {
    let args = ["--field", "f3", "--seed", "7", "--format", "json", "probe", "monoid", "--trials", "20"];
    let a = cmonv(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, cmonv(&args).stdout);
    assert!(!a.stdout.contains("elapsed"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cmonv");
    let ok = Command::new(bin).args(["--field", "q", "probe", "sym"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["--nmax", "0", "axioms"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    // a guard too small for any product trips the dimension check
    let guarded = Command::new(bin).args(["--field", "q", "axioms"]).env("CMONV_GUARD", "1").output().unwrap();
    assert_ne!(guarded.status.code(), Some(0));
}
