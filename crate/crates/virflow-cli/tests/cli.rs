//! End-to-end checks of the binary: determinism of CSV outputs, exit codes,
//! and config-file/flag precedence.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_virflow"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("virflow-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn geodesic_csv_is_byte_identical_across_runs() {
    let dir = tmpdir("determinism");
    let run = |stem: &str| {
        let status = bin()
            .args([
                "geodesic",
                "--model",
                "h10",
                "--init",
                "0,0.05,0.02",
                "--n",
                "32",
                "--steps",
                "50",
                "--seed",
                "11",
                "--out",
                stem,
            ])
            .env("VIRFLOW_OUTDIR", &dir)
            .output()
            .unwrap();
        assert!(status.status.success());
        std::fs::read(dir.join(format!("{stem}.csv"))).unwrap()
    };
    let a = run("a");
    let b = run("b");
    assert!(!a.is_empty());
    assert_eq!(a, b, "same config and seed must give identical bytes");
}

#[test]
fn usage_errors_exit_2() {
    let out = bin()
        .args(["geodesic", "--model", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["geodesic", "--model", "h10", "--bogus-flag", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // missing required init
    let out = bin().args(["geodesic", "--model", "h10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn divergence_exits_3_with_partial_outputs() {
    let dir = tmpdir("divergence");
    let out = bin()
        .args([
            "geodesic", "--model", "h10", "--init", "0,0,50", "--n", "32", "--dt", "0.05",
            "--steps", "400", "--out", "blowup",
        ])
        .env("VIRFLOW_OUTDIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let summary = std::fs::read_to_string(dir.join("blowup.json")).unwrap();
    assert!(summary.contains("\"diverged\""));
    assert!(!summary.contains("\"diverged\": null"));
    assert!(
        dir.join("blowup.csv").exists(),
        "partial CSV must be written"
    );
}

#[test]
fn check_subcommand_reports_and_exits_0() {
    let dir = tmpdir("check");
    let out = bin()
        .args(["check", "finite", "--seed", "3", "--out", "report"])
        .env("VIRFLOW_OUTDIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[PASS]"));
    let report = std::fs::read_to_string(dir.join("report.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(parsed["all_pass"], serde_json::Value::Bool(true));
    assert!(parsed["results"].as_array().unwrap().len() >= 4);
}

#[test]
fn check_reports_reproducible_for_seed() {
    let run = || {
        let out = bin()
            .args(["check", "su11", "--seed", "7"])
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8_lossy(&out.stdout).into_owned()
    };
    assert_eq!(run(), run());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tmpdir("config");
    let cfg_path = dir.join("run.cfg");
    std::fs::write(
        &cfg_path,
        "# KdV-type run\nmodel = vir10\nmu = 0\nnu = 1\nlambda2 = 1\ninit = 0,0,0,0,0.0001\nn = 32\nsteps = 40\n",
    )
    .unwrap();
    let out = bin()
        .args([
            "geodesic",
            "--config",
            cfg_path.to_str().unwrap(),
            "--steps",
            "20",
            "--out",
            "fromfile",
        ])
        .env("VIRFLOW_OUTDIR", &dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fromfile.json")).unwrap()).unwrap();
    assert_eq!(summary["model"], "vir10");
    assert_eq!(summary["steps"], 20); // flag wins over file
    let csv = std::fs::read_to_string(dir.join("fromfile.csv")).unwrap();
    assert_eq!(csv.lines().count(), 22); // header + 21 states
    assert!(csv.starts_with("t,energy,lambda1,lambda2,a0,a1,b1"));
}

#[test]
fn steer_emits_plan_and_path() {
    let dir = tmpdir("steer");
    let out = bin()
        .args([
            "steer",
            "--target-rotation",
            "0.2",
            "--tol",
            "1e-4",
            "--grid",
            "128",
            "--out",
            "rot",
        ])
        .env("VIRFLOW_OUTDIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let plan: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("rot_plan.json")).unwrap()).unwrap();
    assert!(plan["endpoint_error"].as_f64().unwrap() <= 1e-4);
    assert_eq!(plan["stages"].as_array().unwrap().len(), 4);
    let path_csv = std::fs::read_to_string(dir.join("rot_path.csv")).unwrap();
    assert!(path_csv.starts_with("t,theta,phi"));
}
