//! The binary, end to end: output, exit codes and the files it writes.
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parazeta"))
        .args(args)
        .env("PARAZETA_OUT", out)
        .output()
        .expect("spawn parazeta")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn inspect_reports_weyl_orders_and_roots() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["inspect", "G2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("|W| = 12"));

    let o = bin(d.path(), &["--format", "json", "inspect", "A1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rho_pairings"], serde_json::json!(["1"]));

    let o = bin(d.path(), &["--format", "json", "inspect", "C2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["positive_roots"].as_array().unwrap().len(), 4);
}

#[test]
fn zeta_prints_the_closed_form_and_writes_stages() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["zeta", "SL2", "B"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "xi(2*s-1)/(s) - xi(2*s)/(s-1)");
    let dir = d.path().join("zeta-SL2-B");
    for f in ["period.json", "residue.json", "xi_o.json", "zeta.json", "zeta.tex", "manifest.json"] {
        assert!(dir.join(f).is_file(), "{f} missing");
    }
    assert_eq!(json(&dir.join("manifest.json"))["command"], "zeta");

    let o = bin(d.path(), &["--no-files", "--format", "latex", "zeta", "SL2", "B"]);
    assert!(stdout(&o).contains(r"\xi(2s-1)"));
}

#[test]
fn zeta_report_flags_a_golden_mismatch() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["zeta", "SL4", "P22", "--report"]);
    let dir = d.path().join("zeta-SL4-P22");
    let rec = json(&dir.join("record.json"));
    assert_eq!(rec["c"], "1");
    let poles = json(&dir.join("poles.json"));
    assert_eq!(poles["poles"].as_array().unwrap().len(), 4);
    let cmp = json(&dir.join("comparison.json"));
    assert_eq!(cmp["matched"], false, "{}", stdout(&o));
}

#[test]
fn eval_distinguishes_regular_points_poles_and_near_poles() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["--no-files", "eval", "SL2", "B", "--s", "2,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("f(2+0i) = -1.4005622115"));

    let o = bin(d.path(), &["--no-files", "eval", "SL2", "B", "--s", "1,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pole"));

    let o = bin(d.path(), &["--no-files", "eval", "SL2", "B", "--s", "1.0000000000001,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("warning: near-singular"));
}

#[test]
fn usage_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    for args in [
        &["frobnicate"][..],
        &["verify", "SL2", "B"],
        &["zeta", "E6", "P1"],
        &["zeta", "SL3", "P33"],
        &["--digits", "10", "zeta", "SL2", "B"],
    ] {
        let o = bin(d.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn verify_writes_checks_and_passes_on_g2() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["verify", "G2", "Pshort", "--fe", "--poles", "--points", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("poles: {-2, 0, 1, 3}"));
    let dir = d.path().join("verify-G2-Pshort");
    assert_eq!(json(&dir.join("fe.json"))["passed"], true);
    assert!(dir.join("pole_checks.json").is_file());
}

#[test]
fn verify_golden_fails_with_exit_one_on_a_mismatch() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["--no-files", "verify", "SL4", "P22", "--golden"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = bin(d.path(), &["--no-files", "verify", "G2", "Plong", "--golden"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_rh_writes_zero_tables() {
    let d = tempfile::tempdir().unwrap();
    let o = bin(d.path(), &["verify", "SL2", "B", "--rh", "--tmax", "15"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let dir = d.path().join("verify-SL2-B");
    let zeros = fs::read_to_string(dir.join("zeros.csv")).unwrap();
    assert!(zeros.starts_with("t,absf,multiplicity"));
    // The scan covers whole boxes, so it may run a little past --tmax.
    let rows: Vec<f64> = zeros.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(!rows.is_empty() && rows.windows(2).all(|w| w[0] < w[1]) && rows[0] > 0.0);
    assert!(fs::read_to_string(dir.join("line.csv")).unwrap().starts_with("t,re_f"));
    let rh = json(&dir.join("rh.json"));
    assert!(rh["boxes"].as_array().unwrap().iter().all(|b| b["verdict"] == "consistent"));
}

#[test]
fn oracle_examples_pass() {
    let d = tempfile::tempdir().unwrap();
    for args in [
        &["--no-files", "oracle", "--residue", "xi(2*s)/(s-1)", "--along", "s-1"][..],
        &["--no-files", "oracle", "--period", "A2", "--along", "z1-z2-1"],
        &["--no-files", "oracle", "--group", "SL3", "--parabolic", "P21", "--anchors", "3"],
    ] {
        let o = bin(d.path(), args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("pass"));
    }
}

#[test]
fn same_seed_gives_identical_files() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["--seed", "7", "verify", "Sp4", "Pe1-e2", "--fe", "--poles", "--golden", "--points", "20"];
    assert_eq!(bin(a.path(), &args).status.code(), Some(0));
    assert_eq!(bin(b.path(), &args).status.code(), Some(0));
    let (da, db) = (a.path().join("verify-Sp4-Pe1-e2"), b.path().join("verify-Sp4-Pe1-e2"));
    let mut names: Vec<_> = fs::read_dir(&da).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 4);
    for n in names {
        if n == "manifest.json" {
            let (mut x, mut y) = (json(&da.join(&n)), json(&db.join(&n)));
            x["timestamp"] = Value::Null;
            y["timestamp"] = Value::Null;
            assert_eq!(x, y);
        } else {
            assert_eq!(fs::read(da.join(&n)).unwrap(), fs::read(db.join(&n)).unwrap(), "{n:?}");
        }
    }
}
