use std::path::Path;
use std::process::{Command, Output};

fn chemolab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chemolab"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("CHEMOLAB_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SWEEP: &str = r#"{
    "axes": [ {"name": "alpha", "min": 1.1, "max": 6.0, "steps": 20},
              {"name": "beta",  "min": 1.1, "max": 8.0, "steps": 20} ],
    "fixed": {"n": 3, "sigma": 1.0}
}"#;

const EXPERIMENT: &str = r#"{
    "model": {"sigma": 1, "alpha": 2, "beta": 3},
    "grid": {"N": 16, "L": 8},
    "solver": {"t_end": 0.05, "dt_init": 0.01},
    "profile": {"type": "gaussian", "amplitude": 0.5, "width": 1.0},
    "perturbation": {"amplitude": 0.1, "seed": 3}
}"#;

#[test]
fn sweep_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", SWEEP);
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "4", "4"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        let o = chemolab(&out, &["--threads", threads, "--seed", "42", "sweep", &spec]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(out.join("sweep.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    assert!(outputs[0].starts_with(b"# mode=ClassifyOnly cells=400 seed=42\n"));
}

#[test]
fn classify_prints_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = chemolab(dir.path(), &["classify", "--sigma", "2", "--alpha", "3", "--beta", "3", "--k", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["regime"]["verdict"], "Critical");
    assert!(v["ledger"]["d"].is_number());
}

#[test]
fn invalid_parameters_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = chemolab(dir.path(), &["classify", "--sigma", "1", "--alpha", "0.5", "--beta", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha must exceed 1"));
}

#[test]
fn missing_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = chemolab(dir.path(), &["simulate", "/nonexistent/experiment.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "exp.json", EXPERIMENT);
    let out = dir.path().join("out");
    let o = chemolab(&out, &["--seed", "17", "simulate", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("# seed=17\n"));
    assert!(out.join("report.json").exists());
}

#[test]
fn underflow_verdict_is_reported_not_raised() {
    // The stability limit of this tall bump is below dt_min from the start.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "exp.json",
        &EXPERIMENT
            .replace(r#""dt_init": 0.01"#, r#""dt_init": 0.01, "dt_min": 0.009"#)
            .replace(r#""amplitude": 0.5"#, r#""amplitude": 40.0"#),
    );
    let o = chemolab(dir.path(), &["simulate", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "DtUnderflow");
}

#[test]
fn check_passes_and_fault_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let o = chemolab(dir.path(), &["check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir.path().join("check_report.json").exists());

    let o = chemolab(dir.path(), &["check", "--inject-fault", "db_identity"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("failed checks: db_identity"));
}

#[test]
fn unwritable_report_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = chemolab(&blocker, &["check"]);
    assert_eq!(o.status.code(), Some(2));
}
