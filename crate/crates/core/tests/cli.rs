use std::path::PathBuf;
use std::process::{Command, Output};

fn qgw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgw")).args(args).output().expect("qgw runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn build_then_verify_round_trips() {
    for alg in ["function", "group", "twisted"] {
        let path = scratch(&format!("d4-{}.json", alg));
        let out = qgw(&["build", "--k", "4", "--algebra", alg, "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let out = qgw(&["verify", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        assert!(!String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    }
}

#[test]
fn tampered_file_fails_verification() {
    let path = scratch("d2-twisted.json");
    assert!(qgw(&["build", "--k", "2", "--twisted", "--out", path.to_str().unwrap()]).status.success());
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["mult"][0][3]["coeffs"][0] = serde_json::json!([7, 1]);
    let bad = scratch("d2-bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let out = qgw(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let record: serde_json::Value = serde_json::from_slice(out.stderr.trim_ascii()).unwrap();
    assert_eq!(record["code"], "CertificateFailure");
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    for args in [
        vec!["count", "--k", "2,4,6"],
        vec!["classify", "--k", "4", "--format", "markdown"],
        vec!["build", "--k", "4", "--twisted"],
        vec!["o2", "table", "--k-bound", "8"],
    ] {
        let mut one = vec!["--threads", "1"];
        one.extend(&args);
        let mut two = vec!["--threads", "2"];
        two.extend(&args);
        let (a, b) = (qgw(&one), qgw(&two));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{:?}", args);
    }
}

#[test]
fn scan_regular_example_and_exit_codes() {
    let out = qgw(&["o2", "scan-regular", "--k-bound", "12", "--cutoff", "24"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let labels: Vec<&str> = text.lines().skip(1).map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(labels, ["alpha(1)", "beta(2,1/2)"]);

    assert_eq!(qgw(&["count", "--k", "3"]).status.code(), Some(2));
    assert_eq!(qgw(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qgw(&["count", "--k", "2", "--format", "qgw-1"]).status.code(), Some(2));
    let missing = qgw(&["verify", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn failed_runs_leave_no_output_file() {
    let path = scratch("never.tsv");
    let _ = std::fs::remove_file(&path);
    let out = qgw(&["count", "--k", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
}
