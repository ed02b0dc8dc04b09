use std::path::PathBuf;
use std::process::{Command, Output};

use ccsurvive::normal::CurveFile;
use ccsurvive::registry::{generator, load_surface};
use ccsurvive::twist::dehn_twist;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccsurvive")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Writes a named generator as a curve file and returns its path.
fn curve_file(surface: &str, name: &str) -> String {
    let s = load_surface(surface).unwrap();
    let c = generator(&s, name).unwrap();
    let file = name.replace(['{', '}', ','], "_");
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{surface}_{file}.json"));
    std::fs::write(&path, serde_json::to_string(&CurveFile::from_curve(&c)).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn surface_info() {
    let out = run(&["surface", "info", "S06"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["triangles"], 8);
    assert_eq!(v["config"]["surface"], "S06");
}

#[test]
fn distance_of_disjoint_generators() {
    let a = curve_file("S06", "c_{p1,p2}");
    let b = curve_file("S06", "c_{p3,p4}");
    let out = run(&["dist", "--complex", "surv", &a, &b]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["value"], 1);
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(v["config"]["budget"]["weight"], 20);
}

#[test]
fn reports_are_reproducible() {
    let a = curve_file("S06", "c_{p1,p2}");
    let b = curve_file("S06", "c_{p2,p3}");
    for args in [
        vec!["dist", "--complex", "surv", a.as_str(), b.as_str()],
        vec!["path", a.as_str(), b.as_str()],
        vec!["audit", "slim", "--n", "6", "--seed", "3"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn named_curve_arguments() {
    let out = run(&["curve", "intersect", "S06:c_{p1,p2}", "S06:c_{p2,p3}"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["count"], 2);
}

#[test]
fn reports_chain_into_later_commands() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let w = dir.join("chain_witness.json");
    let out = run(&["witness", "S06:c_{z,p1}", "--out", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["project", "--witness", w.to_str().unwrap(), "S06:c_{p1,p2}"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["codes"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_1() {
    let out = run(&["dist", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["formula", "--k", "20", "S06:c_{p1,p2}", "S06:c_{p3,p4}"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "KTooSmall");
}

#[test]
fn module_errors_carry_codes() {
    let out = run(&["dist", "--complex", "surv", "S06:c_{z,p1}", "S06:c_{p3,p4}"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "NotAVertex");
}

#[test]
fn budget_abort_exits_3() {
    // Far enough from c_{p1,p2} that the search has to enumerate curves.
    let s = load_surface("S06").unwrap();
    let mut c = generator(&s, "c_{p1,p3}").unwrap();
    for (along, power) in [("c_{p2,p4}", 2), ("c_{p3,p5}", -2), ("c_{p1,p4}", 2), ("c_{p2,p5}", 2)] {
        c = dehn_twist(&s, &generator(&s, along).unwrap(), power, &c).unwrap();
    }
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("far_curve.json");
    std::fs::write(&path, serde_json::to_string(&CurveFile::from_curve(&c)).unwrap()).unwrap();
    let out = run(&["dist", "--complex", "surv", "--max-curves", "3", "S06:c_{p1,p2}", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "BudgetTooLarge");
}
