//! End-to-end runs of the `sav` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn repo(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn program(name: &str) -> String {
    repo(&format!("programs/{name}"))
}

fn sav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sav"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(text: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("input.whl");
    std::fs::write(&path, text).unwrap();
    (dir, path.to_string_lossy().into_owned())
}

#[test]
fn translate_fact() {
    let o = sav(&["translate", &program("fact.whl")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("requires n_0 >= 0 && aux_0 = n_0;"), "{out}");
    assert!(out.contains("ensures f_2 = fact(aux_0);"));
    assert!(out.contains("-- final versions: aux=0, f=2, i=2, j=1, n=0, r=1"));
}

#[test]
fn translate_structured_keys() {
    let o = sav(&["translate", "--format", "structured", &program("fact.whl")]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = json
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(keys, ["final_versions", "post", "pre", "program"]);
    assert_eq!(json["final_versions"]["f"], "2");
    assert_eq!(json["pre"], "n_0 >= 0 && aux_0 = n_0");
}

#[test]
fn translate_skip_leaves_versions() {
    let (_dir, path) = scratch("requires true; ensures true; skip");
    let o = sav(&["translate", &path]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("skip"), "{out}");
}

#[test]
fn malformed_input_is_a_parse_error() {
    let (_dir, path) = scratch("requires true; ensures true; x :=");
    let o = sav(&["translate", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":1:"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = sav(&["vcgen", &program("no_such_file.whl")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_fact() {
    let o = sav(&["run", &program("fact.whl"), "--state", "n=4,aux=4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("f=24") && out.contains("i=5"), "{out}");
}

#[test]
fn run_single_assignment_listing() {
    let golden = repo("crates/core/tests/golden/fact_sa.whl");
    let o = sav(&["run", &golden, "--state", "n=4,aux=4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("f_1.1=24"));
}

#[test]
fn run_reports_fuel_exhaustion() {
    let (_dir, path) =
        scratch("requires true; ensures true; while true invariant true do { skip }");
    let o = sav(&["run", &path, "--fuel", "50"]);
    assert!(stdout(&o).contains("fuel exhausted"), "{}", stdout(&o));
}

#[test]
fn run_rejects_a_bad_state() {
    let o = sav(&["run", &program("fact.whl"), "--state", "n=="]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vcgen_counts() {
    let o = sav(&["vcgen", &program("increment.whl")]);
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("vc ")).count(),
        1
    );
    let o = sav(&["vcgen", &program("fact.whl")]);
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("vc ")).count(),
        5
    );
}

#[test]
fn vcgen_writes_scripts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_string_lossy().into_owned();
    let o = sav(&["vcgen", &program("fact.whl"), "--emit-smt", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "vc_1.smt2",
            "vc_2.smt2",
            "vc_3.smt2",
            "vc_4.smt2",
            "vc_5.smt2"
        ]
    );
}

#[test]
fn vcgen_structured_schema() {
    let o = sav(&["vcgen", "--format", "structured", &program("fact.whl")]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let vcs = json["vcs"].as_array().unwrap();
    assert_eq!(vcs.len(), 5);
    assert_eq!(vcs[0]["id"], 1);
    assert!(vcs[0]["origin"]["rule"].is_string());
    assert!(vcs[0]["formula"].is_string());
}

#[test]
fn check_verdicts() {
    let args = [
        "--var-range",
        "n=0:6",
        "--var-range",
        "aux=0:6",
        "--range",
        "-2:8",
    ];
    let run = |name: &str| {
        let p = program(name);
        let mut all = vec!["check", p.as_str()];
        all.extend(args);
        sav(&all)
    };
    let o = run("fact_strengthened.whl");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run("fact_outer_true.whl");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample"));
}

#[test]
fn check_prints_the_counterexample() {
    let o = sav(&["check", &program("increment_wrong.whl")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample: x=0"), "{}", stdout(&o));
}

#[test]
fn check_structured_carries_verdicts() {
    let o = sav(&["check", "--format", "structured", &program("increment.whl")]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(json["vcs"][0].get("verdict").is_some());
}

#[test]
fn solver_failure_is_exit_four() {
    let o = sav(&["check", &program("increment.whl"), "--solver", "false"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn fuzz_healthy_build() {
    let dir = tempfile::tempdir().unwrap();
    let artifacts = dir.path().join("a").to_string_lossy().into_owned();
    let o = sav(&["fuzz", "--iterations", "1000", "--artifacts", &artifacts]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!dir.path().join("a").exists());
}

#[test]
fn fuzz_reports_a_planted_fault() {
    let dir = tempfile::tempdir().unwrap();
    let artifacts = dir.path().to_string_lossy().into_owned();
    let o = sav(&[
        "fuzz",
        "--iterations",
        "200",
        "--seed",
        "3",
        "--artifacts",
        &artifacts,
        "--plant-fault",
        "swap-merge",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL"), "{out}");
    assert!(out.contains("seed 3"));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn fuzz_needs_an_iteration() {
    let o = sav(&["fuzz", "--iterations", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
