use std::process::{Command, Output};

use ncc_core::io::{parse_edge_list, write_strategy};
use ncc_core::{build_cg_doubleprime, ClusterGraph, ClusterStrategy};

fn ncc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncc")).args(args).env_remove("NCC_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn generate_ccc3_has_36_edges() {
    let o = ncc(&["generate", "--stage", "ccc", "--m", "3", "--format", "edges"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 36);
}

#[test]
fn generated_edge_list_round_trips() {
    let o = ncc(&["generate", "--stage", "double-prime", "--m", "5", "--format", "edges"]);
    let parsed = parse_edge_list(&stdout(&o)).unwrap();
    let s = ClusterStrategy::double_fan(5).unwrap();
    assert_eq!(parsed, build_cg_doubleprime(5, &s).unwrap());
}

#[test]
fn generate_json_and_dot() {
    let o = ncc(&["generate", "--stage", "prime", "--m", "4", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 64);
    let o = ncc(&["generate", "--stage", "cube", "--m", "4", "--format", "dot"]);
    assert!(stdout(&o).starts_with("graph \"cube_m4\" {"));
}

#[test]
fn report_m5_exact() {
    let o = ncc(&["report", "--m", "5", "--exact", "--no-spectral"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["n"], 576);
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["safe_target"], "1/72");
}

#[test]
fn verify_intact_build() {
    let o = ncc(&["verify", "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn verify_reports_broken_strategy() {
    // triangulations alternating with a rotated copy break the link condition at m=5
    let fan = ClusterGraph::double_fan(5).unwrap();
    let rotated = fan.rotated(1);
    let assignment = (0..32u32).map(|v| v.count_ones() % 2).collect();
    let s = ClusterStrategy::per_vertex("parity", 5, vec![fan, rotated], assignment).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("parity.txt");
    std::fs::write(&path, write_strategy(&s)).unwrap();
    let o = ncc(&["verify", "--m", "5", "--strategy", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL strategy-valid: link-neighbor-set"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[strategy-valid]"));
}

#[test]
fn argument_errors_exit_2() {
    for args in [
        &["phi", "--m", "9"][..],
        &["report", "--m", "5", "--c", "1/2"],
        &["separator", "--m", "5", "--direction", "6"],
        &["route", "--m", "4", "--from", "b0000:d2:p2", "--to", "b0000:d1:p2"],
        &["generate", "--stage", "prime", "--m", "3"],
        &["phi", "--m", "4", "--sample", "10"],
        &["nonsense"],
    ] {
        assert_eq!(ncc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = ["phi", "--m", "5", "--sample", "5000", "--seed", "11"];
    let a = ncc(&args);
    let b = ncc(&[&args[..], &["--threads", "3"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 11);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let r1 = ncc(&["report", "--m", "4", "--sample", "2000", "--seed", "5", "--out", out]);
    let saved = std::fs::read(dir.path().join("report.json")).unwrap();
    let r2 = ncc(&["report", "--m", "4", "--sample", "2000", "--seed", "5"]);
    assert_eq!(r1.stdout, r2.stdout);
    assert_eq!(saved, r1.stdout);
}

#[test]
fn phi_writes_csv_with_one_row_per_edge() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncc(&["phi", "--m", "4", "--exact", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("phi.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("edge_id,kind,label_u,label_v,count"));
    assert_eq!(csv.lines().count(), 1 + 384);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("phi_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["phi_max"]["long"], 1920);
}

#[test]
fn exact_phi_independent_of_threads() {
    let a = ncc(&["phi", "--m", "5", "--threads", "1"]);
    let b = ncc(&["phi", "--m", "5", "--threads", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn route_prints_frozen_trace() {
    let o = ncc(&["route", "--m", "4", "--from", "b0000:d1:p2", "--to", "b1000:d1:p2"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[1], "long b1000:d1:p2");
    assert_eq!(lines[9], "short b1000:d1:p2");
}

#[test]
fn separator_and_spectral_json() {
    let v = json(&ncc(&["separator", "--m", "6"]));
    assert_eq!(v["size"], 3 * 32);
    assert_eq!(v["valid"], true);
    assert_eq!(v["separator"].as_array().unwrap().len(), 96);
    let v = json(&ncc(&["spectral", "--m", "4", "--tol", "1e-10"]));
    let l2 = v["lambda2"].as_f64().unwrap();
    assert!((l2 / 2.0 - v["cheeger_lower"].as_f64().unwrap()).abs() < 1e-15);
    assert!(l2 > 0.0);
}
