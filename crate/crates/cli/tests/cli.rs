use std::path::PathBuf;
use std::process::{Command, Output};

fn acycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acycle")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn sample_then_verify_msa_and_ph_agree() {
    let path = scratch("lm.txt");
    let p = path.to_str().unwrap();
    let out = acycle(&["sample", "--process", "lm", "--n", "7", "--d", "2", "--seed", "4", "-o", p]);
    assert!(out.status.success());

    let verify = stdout_json(&acycle(&["verify", p, "--d", "2"]));
    let msa = stdout_json(&acycle(&["msa", p, "--d", "2"]));
    let value = verify["msa"].as_str().unwrap().to_string();
    assert_eq!(verify["persistence"].as_str().unwrap(), value);
    assert_eq!(verify["betti_integral"].as_str().unwrap(), value);
    assert!(msa.to_string().contains(&value), "{msa}");

    let csv = acycle(&["ph", p, "--degree", "1", "--format", "csv", "--backend", "modular"]);
    assert!(csv.status.success());
    let rows = String::from_utf8(csv.stdout).unwrap().lines().count();
    // header plus one pair per simplex of the spanning acycle
    assert_eq!(rows, 1 + 15);
}

#[test]
fn failed_precondition_exits_with_two() {
    let path = scratch("disconnected.txt");
    std::fs::write(&path, "# vertices 3\n0 0\n1 0\n2 0\n0 1 1/2\n").unwrap();
    let out = acycle(&["verify", path.to_str().unwrap(), "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));
}

#[test]
fn unreadable_input_exits_with_one() {
    let out = acycle(&["verify", scratch("missing.txt").to_str().unwrap(), "--d", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn limit_reports_zeta_three() {
    let v = stdout_json(&acycle(&["limit", "--d", "1", "--tol", "1e-6"]));
    assert!((v["I"].as_f64().unwrap() - 1.2020569031595942).abs() < 1e-6);
}

#[test]
fn kalai_matches_closed_form() {
    let v = stdout_json(&acycle(&["kalai", "--n", "5", "--d", "2"]));
    assert_eq!(v["sum"], "125");
    assert_eq!(v["matches"], true);
}

#[test]
fn experiment_writes_outputs() {
    let trials = scratch("exp/trials.csv");
    let summary = scratch("exp/summary.json");
    let config = scratch("exp.json");
    let cfg = serde_json::json!({
        "process": {"kind": "clique", "n": 8, "d": 2},
        "degree": 1,
        "trials": 6,
        "seed": 3,
        "outputs": {"trials_csv": trials, "summary_json": summary},
    });
    std::fs::write(&config, cfg.to_string()).unwrap();
    let v = stdout_json(&acycle(&["experiment", config.to_str().unwrap(), "--verify", "all"]));
    assert_eq!(v["verified"], 6);
    assert_eq!(std::fs::read_to_string(&trials).unwrap().lines().count(), 7);
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(written["mean_exact"], v["mean_exact"]);
}

#[test]
fn scaling_and_rho_emit_tables() {
    let out = acycle(&["scaling", "--d", "1", "--ns", "10,20", "--trials", "10"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    let rho = stdout_json(&acycle(&["rho", "--n", "6", "--d", "2", "--m", "0,20", "--trials", "20"]));
    assert_eq!(rho[0]["estimate"], 1.0);
    assert_eq!(rho[1]["estimate"], 0.0);
}
