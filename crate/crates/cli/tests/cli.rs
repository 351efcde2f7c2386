use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_leftheart"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const TWO: &str = r#"{"source": {"generators": 1}, "target": {"generators": 1}, "matrix": [[2]]}"#;
const FOUR: &str = r#"{"source": {"generators": 1}, "target": {"generators": 1}, "matrix": [[4]]}"#;

#[test]
fn shipped_scenarios_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lat");
    let o = run(&["run", scenario("lat-heart.toml").to_str().unwrap(), "--out", out.to_str().unwrap(), "--bounds", "samples=40"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 7);
    assert!(fs::read_to_string(out.join("report.txt")).unwrap().starts_with("PASS"));
}

#[test]
fn negative_control_exits_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["run", scenario("free-or-z4.toml").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Z/2 ⊂ Z/4"));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let cert = &report["tasks"][0]["reports"][0]["failures"][0];
    assert_eq!(cert["subobject"], "Z/2");

    // the certificate's scenario replays the failure on its own
    let replay = write(dir.path(), "replay.json", &cert["scenario"].to_string());
    let o = run(&["run", &replay, "--out", dir.path().join("replay").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn empty_and_malformed_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.json", r#"{"schema": 1, "tasks": []}"#);
    let o = run(&["run", &empty, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let bad = write(dir.path(), "bad.json", r#"{"schema": 1, "tasks": [{"op": "factor"#);
    assert_eq!(run(&["run", &bad]).status.code(), Some(2));
    let schema = write(dir.path(), "schema.json", r#"{"schema": 9, "tasks": []}"#);
    assert_eq!(run(&["run", &schema]).status.code(), Some(2));
    assert_eq!(run(&["run", "/nonexistent/scenario.toml"]).status.code(), Some(2));
    // randomized operations need a seed
    assert_eq!(run(&["localize-check"]).status.code(), Some(2));
    assert_eq!(run(&["check-axioms", "--predicate", "torsion-exponent:0"]).status.code(), Some(2));
}

#[test]
fn single_operations() {
    let dir = tempfile::tempdir().unwrap();
    let sum = write(dir.path(), "sum.json", r#"{"source": {"generators": 2}, "target": {"generators": 1}, "matrix": [[2, 2]]}"#);
    let o = run(&["factor", "--predicate", "torsion-free", "--morphism", &sum]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("through:     Z"));

    let complex = write(
        dir.path(),
        "c.json",
        r#"[{"degree": -1, "object": {"generators": 1}, "differential": [[2]]}, {"degree": 0, "object": {"generators": 1}}]"#,
    );
    let o = run(&["cohomology", "--predicate", "torsion-free", "--complex", &complex, "--degree", "0", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["tasks"][0]["output"]["shadow"], "Z/2");

    let two = write(dir.path(), "two.json", TWO);
    let four = write(dir.path(), "four.json", FOUR);
    let o = run(&["heart-hom", "--predicate", "torsion-exponent:2", "--x", &two, "--y", &four]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Hom = Z/2"));

    for (pred, m, class) in [("torsion-exponent:2", &two, "in_E"), ("torsion-exponent:2", &four, "in_hull"), ("torsion-free", &two, "heart_only")] {
        let o = run(&["hull-classify", "--predicate", pred, "--morphism", m]);
        assert!(stdout(&o).starts_with(class), "{pred}: {}", stdout(&o));
    }
}

#[test]
fn sampled_commands_and_exit_codes() {
    let o = run(&["percolate-check", "--subclass", "finite", "--seed", "5", "--bounds", "samples=30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["percolate-check", "--subclass", "free", "--seed", "5", "--bounds", "samples=30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("leaves free"));
    let o = run(&["check-axioms", "--predicate", "torsion-exponent:2", "--axioms", "R1,DR2", "--seed", "1", "--bounds", r#"{"samples": 25}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("axiom:DR2"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for (i, jobs) in ["1", "0", "0"].iter().enumerate() {
        let out = dir.path().join(i.to_string());
        let o = run(&["run", scenario("e2-freyd.toml").to_str().unwrap(), "--out", out.to_str().unwrap(), "--bounds", "samples=30", "--jobs", jobs]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        bodies.push(fs::read(out.join("report.json")).unwrap());
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}
