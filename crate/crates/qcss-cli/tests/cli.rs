//! End-to-end checks of the binary: exit codes, file output, and byte-level
//! determinism of the primary outputs.

use std::path::Path;
use std::process::{Command, Output};

fn qcss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn generate_reproduces_published_body() {
    let dir = std::env::temp_dir().join("qcss_cli_generate_test");
    let _ = std::fs::remove_dir_all(&dir);
    let out = qcss(&[
        "generate",
        "--construction",
        "quadratic",
        "-p",
        "3",
        "-n",
        "2",
        "-Q",
        "10",
        "--poly",
        "x4+x+2",
        "--g",
        "a",
        "--chi-mult",
        "a2",
        "--index",
        "0,g+1,1",
        "--index",
        "0,g,-1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let meta: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(meta["expected_parameters"]["M"], 810);

    let text = std::fs::read_to_string(dir.join("S_0_1+a_1.txt")).unwrap();
    let (header, body) = text.split_once('\n').unwrap();
    assert_eq!(
        header,
        "# qcss v1 construction=quadratic p=3 n=2 Q=10 A=3 index=0,1+a,1"
    );
    assert_eq!(body, include_str!("../../qcss-core/tests/data/example2_s_0_gp1_1.txt"));

    let text = std::fs::read_to_string(dir.join("S_0_a_2.txt")).unwrap();
    let (_, body) = text.split_once('\n').unwrap();
    assert_eq!(body, include_str!("../../qcss-core/tests/data/example2_s_0_g_m1.txt"));
}

#[test]
fn generate_order8_mixed_matrix() {
    let dir = std::env::temp_dir().join("qcss_cli_generate_mixed0");
    let _ = std::fs::remove_dir_all(&dir);
    let out = qcss(&[
        "generate",
        "--construction",
        "mixed0",
        "-p",
        "5",
        "-n",
        "1",
        "-Q",
        "6",
        "--Delta",
        "8",
        "--poly",
        "a2-2",
        "--g",
        "1+2a",
        "--index",
        "1,1,0",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("S_1_1_0.txt")).unwrap();
    let (header, body) = text.split_once('\n').unwrap();
    assert!(header.contains("construction=mixed0"));
    assert!(header.contains("Delta=8"));
    assert_eq!(body.lines().next().unwrap(), "2 0 5 1");
    assert_eq!(body, include_str!("../../qcss-core/tests/data/example4_s_1_1_0.txt"));
}

#[test]
fn generate_is_byte_deterministic() {
    let run = |dir: &Path| {
        let out = qcss(&[
            "generate",
            "--construction",
            "quadratic",
            "-p",
            "5",
            "-n",
            "1",
            "-Q",
            "4",
            "--all",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        stdout(&out)
    };
    let dir1 = std::env::temp_dir().join("qcss_cli_det_1");
    let dir2 = std::env::temp_dir().join("qcss_cli_det_2");
    let _ = std::fs::remove_dir_all(&dir1);
    let _ = std::fs::remove_dir_all(&dir2);
    let meta1 = run(&dir1);
    let meta2 = run(&dir2);
    assert_eq!(meta1, meta2);
    let mut names: Vec<_> = std::fs::read_dir(&dir1)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 100); // M = 25 * 4
    for name in names {
        let a = std::fs::read(dir1.join(&name)).unwrap();
        let b = std::fs::read(dir2.join(&name)).unwrap();
        assert_eq!(a, b, "file {name:?} differs between runs");
    }
}

#[test]
fn verify_passes_and_reports_bound() {
    let out = qcss(&[
        "verify",
        "--construction",
        "quadratic",
        "-p",
        "3",
        "-n",
        "1",
        "-Q",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["theorem_bound"], 4);
    assert_eq!(report["bound_satisfied"], true);
    assert!(report["delta_max"].as_f64().unwrap() <= 4.0 + 1e-6);
}

#[test]
fn verify_cubic_small_field() {
    let out = qcss(&[
        "verify", "--construction", "cubic", "-p", "5", "-n", "1", "-Q", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["M"], 1250);
    assert!(report["delta_max"].as_f64().unwrap() <= 11.0 + 1e-6);
}

#[test]
fn verify_oversized_family_exits_3() {
    let out = qcss(&[
        "verify", "--construction", "cubic", "-p", "5", "-n", "2", "-Q", "26",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn budget_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_qcss"))
        .args(["verify", "--construction", "quadratic", "-p", "3", "-n", "1", "-Q", "2"])
        .env("QCSS_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_q_is_usage_error() {
    let out = qcss(&["generate", "--construction", "quadratic", "-p", "3", "-n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_construction_is_usage_error() {
    let out = qcss(&[
        "verify", "--construction", "quartic", "-p", "3", "-n", "1", "-Q", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_single_ids() {
    for id in ["1", "L6", "L7"] {
        let out = qcss(&["reproduce", id]);
        assert_eq!(out.status.code(), Some(0), "id {id}");
        let text = stdout(&out);
        assert!(text.contains("PASS"), "id {id}: {text}");
        assert!(!text.contains("FAIL"), "id {id}: {text}");
    }
}

#[test]
fn reproduce_family_scans() {
    let out = qcss(&["reproduce", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("delta_max"));
    assert!(text.contains("2 passed, 0 failed"));
}

#[test]
fn table_marks_invalid_points() {
    let out = qcss(&["table", "optimal", "--points", "3,1,2;5,1,7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,n,Q,M,K,N,delta_bound,alphabet,scaling_law,identity"
    );
    assert_eq!(lines.next().unwrap(), "3,1,2,18,2,4,4,3,18,PASS");
    assert_eq!(lines.next().unwrap(), "5,1,7,,,,,,,INVALID");
}

#[test]
fn table_near_optimal_identity() {
    let out = qcss(&["table", "near_optimal", "--points", "5,1,2"]);
    let text = stdout(&out);
    assert!(text.contains("5,1,2,1250,2,12,11,5,1250,PASS"), "{text}");
}

#[test]
fn table_default_grid_is_all_pass() {
    let out = qcss(&["table", "optimal", "--max-q", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().count() > 10);
    assert!(!text.contains("FAIL"));
    assert!(!text.contains("INVALID"));
}

#[test]
fn codebook_reports_induced_identity() {
    let out = qcss(&[
        "codebook", "--construction", "quadratic", "-p", "3", "-n", "1", "-Q", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["U"], 72);
    assert_eq!(report["V"], 8);
    assert!(report["induced_identity_gap"].as_f64().unwrap() < 1e-6);
    assert_eq!(report["welch_satisfied"], true);
}

#[test]
fn codebook_csv_row() {
    let out = qcss(&[
        "codebook", "--construction", "quadratic", "-p", "3", "-n", "1", "-Q", "2", "--csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("M,K,N,A,delta_max"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("18,2,4,3,4"), "{row}");
    assert!(row.ends_with(",quadratic"), "{row}");
}

#[test]
fn charsum_cubic_sum() {
    let out = qcss(&[
        "charsum", "--kind", "additive", "-p", "5", "-m", "4", "--poly", "x4+x3+2x2+2", "--h", "z3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["value"][0].as_f64().unwrap() + 50.0).abs() < 1e-6);
}

#[test]
fn charsum_gauss_sum() {
    let out = qcss(&[
        "charsum", "--kind", "gauss", "-p", "5", "-m", "4", "--poly", "x4+x3+2x2+2", "--Delta", "3",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["value"][0].as_f64().unwrap() + 25.0).abs() < 1e-6);
    assert!((v["magnitude"].as_f64().unwrap() - 25.0).abs() < 1e-6);
}

#[test]
fn charsum_mixed_sum() {
    let out = qcss(&[
        "charsum", "--kind", "mixed", "-p", "3", "-m", "4", "--poly", "x4+x3+x2+1", "--g", "1+a2",
        "--Delta", "10", "-r", "1", "--f", "z2-1", "--h", "z",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["value"][0].as_f64().unwrap() - 18.0).abs() < 1e-6, "{v}");
}
