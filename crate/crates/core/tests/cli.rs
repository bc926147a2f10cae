use std::process::Command;

fn qrg(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qrg"))
        .args(args)
        .env_remove("QRG_THREADS")
        .output()
        .unwrap()
}

#[test]
fn theory_prints_constants() {
    let out = qrg(&["theory", "--beta", "2", "--lambda", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["F"].as_f64().unwrap() - 1.792_723_4).abs() < 1e-6);
    assert!((v["gamma"].as_f64().unwrap() - 0.697_069_9).abs() < 1e-6);
}

#[test]
fn invalid_parameters_exit_with_one() {
    let out = qrg(&["theory", "--beta", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta"));
}

#[test]
fn simulate_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let out = qrg(&[
        "simulate", "--beta", "2", "--lambda", "0.5", "--n", "500,1000", "--reps", "3",
        "--seed", "4", "--out", path.to_str().unwrap(), "--threads", "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(&path).unwrap();
    assert!(rows.starts_with("schema,n,replicate,seed,"));
    assert_eq!(rows.lines().count(), 7);
    assert!(dir.path().join("run.summary.csv").exists());

    let again = dir.path().join("again.csv");
    qrg(&[
        "simulate", "--beta", "2", "--lambda", "0.5", "--n", "500,1000", "--reps", "3",
        "--seed", "4", "--out", again.to_str().unwrap(), "--threads", "1",
    ]);
    assert_eq!(rows, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn export_graph_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("g");
    let out = qrg(&[
        "export-graph", "--beta", "1", "--lambda", "1", "--n", "200", "--out",
        prefix.to_str().unwrap(), "--audit", "--keep-multi",
    ]);
    assert!(out.status.success());
    for ext in ["vertices", "edges", "components", "points"] {
        let text = std::fs::read_to_string(dir.path().join(format!("g.{ext}"))).unwrap();
        assert!(!text.is_empty(), "{ext}");
    }
}

#[test]
fn oracle_reports_agreement() {
    let out = qrg(&[
        "oracle", "--beta", "2", "--lambda", "0.5", "--trials", "4000", "--pop-cap", "500", "--check",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["agree"], serde_json::Value::Bool(true));
}
