//! End-to-end checks of the `bp` binary: output formats, exit codes, and
//! byte-level determinism under a fixed seed.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("bp-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn trace_of_empty_three_ball_circuit() {
    let path = write_temp("empty3.json", r#"{"n":3,"gates":[]}"#);
    let out = bp(&["trace", "--circuit", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "6.000000000000+0.000000000000i\n");
}

#[test]
fn ybe_prints_ok() {
    let out = bp(&["ybe", "--x", "1", "--y", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("residual\t"));
    assert!(text.trim_end().ends_with("OK"));
}

#[test]
fn classical_decide_yes_with_witness() {
    let path = write_temp(
        "prog.json",
        r#"{"n":3,"swaps":[[1,2],[2,3]],"probs":[0.5,0.5]}"#,
    );
    let out = bp(&[
        "classical",
        "decide",
        "--program",
        path.to_str().unwrap(),
        "--target",
        "2,3,1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("YES\n"));
    assert!(text.contains("witness\t1,2"));
}

#[test]
fn distribution_tsv_has_checksum_line() {
    let path = write_temp(
        "x4.json",
        r#"{"n":2,"gates":[{"kind":"x","theta":"pi/4","i":1,"j":2}]}"#,
    );
    let out = bp(&["simulate", "--circuit", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "1,2\t0.500000000000");
    assert_eq!(lines[1], "2,1\t0.500000000000");
    assert_eq!(lines[2], "sum\t1.000000000000");
}

#[test]
fn distribution_json_round_trips() {
    let path = write_temp(
        "x2.json",
        r#"{"n":2,"gates":[{"kind":"x","theta":0.9,"i":1,"j":2}]}"#,
    );
    let out = bp(&[
        "simulate",
        "--circuit",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let sum = v["sum"].as_f64().unwrap();
    assert!((sum - 1.0).abs() < 1e-9);
    assert!(v["1,2"].as_f64().is_some());
}

#[test]
fn scatter_json_reparses_as_circuit() {
    let path = write_temp(
        "cfg.json",
        r#"{"positions":[0,0.5,2],"velocities":[1,0,-1],"c":1.0}"#,
    );
    let out = bp(&["scatter", "--config", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let c: ballperm::state::Circuit = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(c.n, 3);
    assert_eq!(c.gates.len(), 3);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let path = write_temp(
        "dem.json",
        r#"{"n":3,"gates":[{"kind":"x","theta":0.7,"i":1,"j":2},{"kind":"demolition","pos":1}]}"#,
    );
    let run = || {
        bp(&[
            "simulate",
            "--circuit",
            path.to_str().unwrap(),
            "--shots",
            "25",
            "--seed",
            "7",
        ])
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // And a different seed changes the stream.
    let c = bp(&[
        "simulate",
        "--circuit",
        path.to_str().unwrap(),
        "--shots",
        "25",
        "--seed",
        "8",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn exit_codes() {
    // Unknown verb: usage error 2 (from the argument parser).
    let out = bp(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed JSON: usage error 2.
    let path = write_temp("broken.json", "{ not json");
    let out = bp(&["trace", "--circuit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Domain error: postselecting a zero-probability outcome exits 1.
    let path = write_temp(
        "zero.json",
        r#"{"n":2,"gates":[{"kind":"demolition","pos":1,"postselect":2}]}"#,
    );
    let out = bp(&["simulate", "--circuit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // Success: 0.
    let path = write_temp("ok.json", r#"{"n":2,"gates":[]}"#);
    let out = bp(&["trace", "--circuit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bp_max_n_cap_applies() {
    let path = write_temp("big.json", r#"{"n":12,"gates":[]}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_bp"))
        .args(["trace", "--circuit", path.to_str().unwrap()])
        .env("BP_MAX_N", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let relaxed = Command::new(env!("CARGO_BIN_EXE_bp"))
        .args(["trace", "--circuit", path.to_str().unwrap()])
        .env("BP_MAX_N", "12")
        .output()
        .unwrap();
    assert_eq!(relaxed.status.code(), Some(0));
}

#[test]
fn gadget_reports_angle_and_success() {
    let out = bp(&["gadget", "--z1", "1", "--z2", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("effective-theta\t1.570796326795"));
    assert!(text.contains("fidelity\t1.000000000000"));
}

#[test]
fn irrep_prints_matrix_and_trace() {
    let path = write_temp(
        "c3.json",
        r#"{"n":3,"gates":[{"kind":"x","theta":0.5,"i":1,"j":2}]}"#,
    );
    let out = bp(&[
        "irrep",
        "--shape",
        "2,1",
        "--circuit",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 3); // 2 matrix rows + trace
    assert!(lines[2].starts_with("trace\t"));
}

#[test]
fn tableaux_lists_and_encodes() {
    let out = bp(&["tableaux", "--shape", "3,3", "--encode"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("count\t5"));
    assert!(text.contains("[[1,2,3],[4,5,6]]\t000111"));
}

#[test]
fn project_sums_to_one() {
    let out = bp(&["project", "--n", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.trim_end().ends_with("sum\t1.000000000000"));
}

#[test]
fn wppp_full_set_is_always_feasible() {
    let path = write_temp("wppp.json", r#"{"n":3,"sets":[[1,2,3]]}"#);
    let out = bp(&[
        "wppp",
        "--instance",
        path.to_str().unwrap(),
        "--target",
        "3,1,2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("YES"));
}

#[test]
fn encode_qubits_compare_passes() {
    let path = write_temp(
        "qc.json",
        r#"{"n":2,"gates":[{"kind":"rot","theta":0.392699,"q":1},{"kind":"cnot","c":1,"t":2}]}"#,
    );
    let out = bp(&[
        "encode-qubits",
        "--circuit",
        path.to_str().unwrap(),
        "--compare",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.trim_end().ends_with("OK"), "{text}");
}
