//! Runs the `wsuper` binary on job files and checks reports, exit codes and
//! the golden comparison.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn wsuper(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wsuper"));
    cmd.args(args).env_remove("WSUPER_DEGREE_CAP");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, spec: &Path, extra: &[&str], envs: &[(&str, &str)]) -> (i32, PathBuf) {
    let out = dir.join(name);
    let mut args = vec!["run", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = wsuper(&args, envs);
    (o.status.code().unwrap(), out)
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn osp_report_matches_the_golden_fixture_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let spec = fixture("osp12_job.json");
    let (c1, a) = run_to(dir.path(), "a.json", &spec, &[], &[]);
    let (c2, b) = run_to(dir.path(), "b.json", &spec, &["--sequential"], &[]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let golden = fixture("osp12_report.json");
    let o = wsuper(&["compare", "--report", a.to_str().unwrap(), "--fixture", golden.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = read(&a);
    assert_eq!(r["tasks"]["describe"]["primes"]["5"]["delta"], 5);
    assert_eq!(r["tasks"]["modular"]["primes"]["5"]["baby_verma"]["dims"], serde_json::json!([5, 5]));
}

#[test]
fn compare_reports_differences_with_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = read(&fixture("osp12_report.json"));
    r["tasks"]["describe"]["c"] = "3".into();
    let changed = dir.path().join("changed.json");
    std::fs::write(&changed, serde_json::to_string(&r).unwrap()).unwrap();
    let golden = fixture("osp12_report.json");
    let o = wsuper(&["compare", "--report", changed.to_str().unwrap(), "--fixture", golden.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stdout).contains("$.tasks.describe.c"));
    let missing = dir.path().join("missing.json");
    let o = wsuper(&["compare", "--report", changed.to_str().unwrap(), "--fixture", missing.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn degree_cap_override_surfaces_the_needed_cap() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_to(dir.path(), "r.json", &fixture("osp12_job.json"), &[], &[("WSUPER_DEGREE_CAP", "2")]);
    assert_eq!(code, 3);
    let r = read(&out);
    assert_eq!(r["job"]["degree_cap"], 2);
    assert_eq!(r["tasks"]["relations"]["status"], "error");
    assert!(r["tasks"]["relations"]["needed_degree_cap"].as_i64().unwrap() > 2);
    assert_eq!(r["tasks"]["describe"]["status"], "ok");
}

#[test]
fn malformed_jobs_exit_with_spec_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"algebra": {"type": "gl", "m": 1, "n": 1}, "tasks": ["describe"], "primes": [9]}"#).unwrap();
    let o = wsuper(&["run", "--spec", bad.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not an odd prime"));
}

#[test]
fn prime_override_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    std::fs::write(
        &job,
        r#"{"algebra": {"type": "gl", "m": 1, "n": 1}, "nilpotent": "zero", "primes": [3], "tasks": ["describe", "bounds"]}"#,
    )
    .unwrap();
    let o = wsuper(&["run", "--spec", job.to_str().unwrap(), "--p", "5", "--p", "7", "--format", "text"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("primes: [5, 7]"));
    assert!(text.contains("status: ok"));
    assert!(!text.contains('{'));
}
