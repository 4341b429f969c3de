use std::path::{Path, PathBuf};
use std::process::{Command as Proc, Output};

use parastd_cli::problem::parse_problem;
use parastd_cli::{run, Command, Report, RunOptions, SCHEMA};
use serde_json::Value;

fn problems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn parastd(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_parastd")).args(args).output().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("parastd-contract-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn shipped() -> Vec<PathBuf> {
    let mut v: Vec<_> = std::fs::read_dir(problems_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    v.sort();
    v
}

fn assert_input_error(name: &str, body: &str, code: &str) {
    let path = scratch(name, body);
    let out = parastd(&["gsb", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{name}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with(&format!("error[{code}]")), "{name}: {stderr}");
}

#[test]
fn malformed_problems_exit_one() {
    assert_input_error("syntax.txt", "params: a\nvars: x\norder: lex\nideal: x +\n", "syntax_error");
    assert_input_error("unknown.txt", "params: a\nvars: x\norder: lex\nideal: x*b\n", "unknown_identifier");
    assert_input_error(
        "duplicate.txt",
        "params: a\nvars: x\nvars: y\norder: lex\nideal: x\n",
        "duplicate_section",
    );
    assert_input_error("missing.txt", "params: a\nvars: x\nideal: x\n", "missing_section");
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(parastd(&["--help"]).status.code(), Some(0));
    assert_eq!(parastd(&["gsb", "--format", "yaml", "x.txt"]).status.code(), Some(1));
    assert_eq!(parastd(&["frobnicate"]).status.code(), Some(1));
    let out = parastd(&["gsb", "/nonexistent/problem.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[io]"));
}

#[test]
fn documents_are_deterministic_and_versioned() {
    for path in shipped() {
        let p = path.to_str().unwrap();
        let first = parastd(&["gsb", "--format", "json", p]);
        let second = parastd(&["gsb", "--format", "json", p]);
        assert_eq!(first.status.code(), Some(0), "{p}");
        assert_eq!(first.stdout, second.stdout, "{p}");
        let doc: Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(doc["schema"], SCHEMA);
        assert_eq!(doc["command"], "gsb");
    }
}

#[test]
fn problems_round_trip_through_rendering() {
    for path in shipped() {
        let p = parse_problem(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = parse_problem(&p.render()).unwrap();
        assert!(again == p, "{}", path.display());
    }
}

#[test]
fn verify_exit_codes() {
    let intro = problems_dir().join("intro.txt");
    let p = intro.to_str().unwrap();
    assert_eq!(parastd(&["verify", p]).status.code(), Some(0));
    assert_eq!(parastd(&["verify", "--point", "a=3", p]).status.code(), Some(0));
    // a = 0 lies on the excluded locus of the intro family.
    let out = parastd(&["verify", "--point", "a=0", p]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(parastd(&["verify", "--point", "b=1", p]).status.code(), Some(1));
}

#[test]
fn failed_verification_maps_to_exit_two() {
    let problem = parse_problem(&std::fs::read_to_string(problems_dir().join("intro.txt")).unwrap()).unwrap();
    let report = run(Command::Verify, &problem, &RunOptions::default()).unwrap();
    assert!(report.verified);
    assert_eq!(report.exit_code(), 0);
    let failed = Report {
        verified: false,
        ..report
    };
    assert_eq!(failed.exit_code(), 2);
}

#[test]
fn specialize_needs_one_point() {
    let problem = parse_problem(&std::fs::read_to_string(problems_dir().join("intro.txt")).unwrap()).unwrap();
    assert!(run(Command::Specialize, &problem, &RunOptions::default()).is_err());
    let opts = RunOptions {
        points: vec!["a=2".into()],
        ..RunOptions::default()
    };
    let report = run(Command::Specialize, &problem, &opts).unwrap();
    assert_eq!(report.doc["command"], "specialize");
}
