use std::process::{Command, Output};

use serde_json::Value;

fn wcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcalc")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn bad_csv_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "p,logM\n0,0\n2,1\n1,3\n").unwrap();
    let out = wcalc(&["analyze", "--seq", &format!("file:{}", path.display())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_family_exits_2() {
    assert_eq!(wcalc(&["analyze", "--seq", "nosuch:1"]).status.code(), Some(2));
}

#[test]
fn unmet_hypothesis_exits_3() {
    let out = wcalc(&["fourier", "harness", "--matrix", "constant:gevrey:2", "--points", "1024"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_writes_report_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.json");
    let out = wcalc(&["analyze", "--seq", "gevrey:2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "holds");
    assert_eq!(v["command"], "analyze");
    let csv = std::fs::read_to_string(dir.path().join("g2.logM.csv")).unwrap();
    assert_eq!(csv.lines().count(), 202);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["matrix", "conditions", "--gevrey", "1,2,3"];
    assert_eq!(wcalc(&args).stdout, wcalc(&args).stdout);
}

#[test]
fn fails_and_inconclusive_exit_0() {
    let out = wcalc(&["analyze", "--weight", "powerlog:2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let omega6 = v["result"]["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["condition"] == "omega6")
        .unwrap()
        .clone();
    assert_eq!(omega6["status"], "fails");
}

#[test]
fn construct_trace() {
    let out = wcalc(&["quasi", "construct", "--rows", "1+1/q:q=1..4", "--pmax", "5000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert!(v["result"]["completed"].as_u64().unwrap() >= 3);
    assert!(v["result"]["tail_sum_bound"].as_f64().unwrap() <= 1.0);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_wcalc"))
        .env("WCALC_THREADS", "two")
        .args(["props", "--count", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_wcalc"))
        .env("WCALC_THREADS", "1")
        .args(["props", "--count", "20", "--seed", "9"])
        .output()
        .unwrap();
    assert_eq!(report(&ok)["status"], "holds");
}
