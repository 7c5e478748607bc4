//! The binary's exit codes and output formats.

use std::process::Command;

fn ffradon(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ffradon")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn scan_single_q_is_one_exhaustive_record() {
    let (code, out, _) = ffradon(&["scan", "--q", "2", "--d", "2", "--k", "1", "--vertex", "--trials", "10"]);
    assert_eq!(code, 0);
    let recs: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let ind: Vec<_> = recs.iter().filter(|r| r["method"] == "indicator").collect();
    assert_eq!(ind.len(), 1);
    assert_eq!(ind[0]["exhaustive"], true);
    assert!((ind[0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    for key in
        ["schema", "cmd", "q", "d", "k", "p", "r", "method", "value", "witness", "exhaustive", "seed", "elapsed_ms"]
    {
        assert!(recs.iter().all(|r| r.get(key).is_some()), "missing {key}");
    }
}

#[test]
fn hyperplane_scan_passes() {
    let (code, out, _) = ffradon(&["scan", "--q", "2,3", "--d", "3", "--k", "2", "--vertex", "--trials", "100"]);
    assert_eq!(code, 0);
    let spread: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(spread["method"], "spread");
    assert!(spread["value"].as_f64().unwrap() <= 1.25);
}

#[test]
fn oversized_q_exits_2() {
    let (code, _, err) = ffradon(&["scan", "--q", "2,64", "--d", "3", "--max-points", "4096"]);
    assert_eq!(code, 2);
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn malformed_point_exits_2_with_line() {
    let (code, _, err) = ffradon(&["transform", "--q", "3", "--d", "2", "--function", "0,0:1\n1,z:1"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn sharpness_reports_incoherence_with_exit_1() {
    // the coarse 3x3 grid is coherent; the fine grid is not (see README)
    let (code, out, _) = ffradon(&["sharpness", "--q", "3,5,7", "--d", "2", "--resolution", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3 * 9 + 1);
    let (code, _, err) = ffradon(&["sharpness", "--q", "3,5,7,11", "--d", "2", "--resolution", "21"]);
    assert_eq!(code, 1);
    assert!(err.contains("boundary but max alpha"), "{err}");
}

#[test]
fn lemmas_and_incidence_batches_pass() {
    assert_eq!(ffradon(&["lemmas", "--q", "3", "--d", "2", "--trials", "1000"]).0, 0);
    assert_eq!(ffradon(&["incidence", "--q", "2,3", "--d", "2", "--trials", "100"]).0, 0);
}

#[test]
fn csv_header_is_fixed() {
    let (code, out, _) = ffradon(&["transform", "--q", "2", "--d", "2", "--constant", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "schema,cmd,q,d,k,p,r,method,value,witness,exhaustive,seed,elapsed_ms");
    assert_eq!(lines.count(), 6);
}
