use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sumset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumset"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(output: &Path) -> Value {
    let path = format!("{}.manifest.json", output.display());
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn restricted_sumset_of_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let out = dir.path().join("s.txt");
    let built = sumset(&[
        "construct",
        "--template",
        "conj43",
        "--p",
        "7",
        "--output",
        a.to_str().unwrap(),
    ]);
    assert!(built.status.success());
    let o = sumset(&[
        "sumset",
        "--p",
        "7",
        "--r",
        "2",
        "--a-file",
        a.to_str().unwrap(),
        "--restricted",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cardinality 28"));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 29);
    let m = manifest(&out);
    assert_eq!(m["schema"], 1);
    assert_eq!(m["result"]["cardinality"], 28);
}

#[test]
fn verify_p5_passes_and_writes_a_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = sumset(&["verify", "--p", "5", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: PASS"));
    let m = manifest(&out);
    assert_eq!(m["command"], "verify");
    assert_eq!(m["result"]["verdict"], "PASS");
    assert_eq!(m["result"]["rho"], 20);
    assert!(m["runtime"]["elapsed_secs"].is_number());
}

#[test]
fn manifests_are_reproducible_apart_from_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |name: &str| {
        let out = dir.path().join(name);
        let o = sumset(&[
            "rho",
            "--p",
            "5",
            "--m",
            "6",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        let mut m = manifest(&out);
        m.as_object_mut().unwrap().remove("runtime");
        m["config"]["output"] = Value::Null;
        (m, std::fs::read_to_string(&out).unwrap())
    };
    assert_eq!(strip("a.txt"), strip("b.txt"));
}

#[test]
fn census_csv_has_match_columns() {
    let o = sumset(&["census", "--p", "5", "--m", "11", "--value", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("set,value,match_conj43,match_ek"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.split(',').count() == 4));
}

#[test]
fn sweep_mu_rows_meet_four_p() {
    let o = sumset(&["sweep-mu", "--p", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 480);
    assert!(rows.iter().all(|r| r[4].parse::<u32>().unwrap() >= 20));
}

#[test]
fn exit_codes() {
    // usage and validation errors
    assert_eq!(sumset(&["verify", "--p", "9"]).status.code(), Some(1));
    assert_eq!(sumset(&["rho", "--p", "5"]).status.code(), Some(1));
    assert_eq!(
        sumset(&["sumset", "--p", "5", "--a", "0,x"]).status.code(),
        Some(1)
    );
    // too large without a budget
    assert_eq!(
        sumset(&["rho", "--p", "7", "--m", "20", "--strategy", "exhaustive"])
            .status
            .code(),
        Some(3)
    );
    // truncated by budget
    let o = sumset(&["rho", "--p", "7", "--m", "14", "--budget", "0.05"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("complete=false"));
}

#[test]
fn checkpointed_run_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("r.ckpt");
    let ck = ck.to_str().unwrap();
    let first = sumset(&[
        "rho",
        "--p",
        "7",
        "--m",
        "13",
        "--budget",
        "0.2",
        "--checkpoint",
        ck,
    ]);
    assert_eq!(first.status.code(), Some(2));
    assert!(std::fs::metadata(ck).unwrap().len() > 0);
    let other = sumset(&[
        "rho",
        "--p",
        "7",
        "--m",
        "12",
        "--budget",
        "0.2",
        "--checkpoint",
        ck,
    ]);
    assert_eq!(other.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&other.stderr).contains("checkpoint"));
}

#[test]
fn profile_line_format() {
    let o = sumset(&["profile", "--p", "5", "--sizes", "3,2,2,2,2"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        "p=5 sizes=[3,2,2,2,2] case=1A bound=19 lemma=L2.1"
    );
}

#[test]
fn sampling_prints_its_seed() {
    let o = sumset(&["verify", "--p", "11", "--samples", "2000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed="));
    let a = sumset(&["verify", "--p", "11", "--samples", "2000", "--seed", "5"]);
    let b = sumset(&["verify", "--p", "11", "--samples", "2000", "--seed", "5"]);
    assert_eq!(stdout(&a).lines().nth(1), stdout(&b).lines().nth(1));
}

#[test]
fn bench_reports_rates() {
    let o = sumset(&[
        "bench",
        "--p",
        "5",
        "--m",
        "11",
        "--sets",
        "1000",
        "--seconds",
        "0.2",
        "--seed",
        "1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("sets/s") && text.contains("nodes/s"));
}
