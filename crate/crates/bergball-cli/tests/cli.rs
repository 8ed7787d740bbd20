//! End-to-end tests of the `bergball` binary: exit codes, file emission,
//! determinism across reruns and thread counts, and override precedence.

use std::path::Path;
use std::process::{Command, Output};

fn bergball() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bergball"))
}

fn run(args: &[&str]) -> Output {
    bergball().args(args).output().expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("experiment.conf");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const FAST_GRID: &str = "[grid]\nlevels = 6\nrays = 64\n";

#[test]
fn norms_command_writes_its_files_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let output = run(&["norms", "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let csv = std::fs::read_to_string(out.join("norms.csv")).unwrap();
    assert!(csv.starts_with("quantity,value\n"));
    let echo = std::fs::read_to_string(out.join("config.resolved")).unwrap();
    assert!(echo.contains("[run]"));
    assert!(echo.contains("seed = 42"));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("[pass] norms"));
}

#[test]
fn unit_function_has_unit_norms() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = write_config(dir.path(), "[function]\ncoeffs_re = 1.0\n");
    let output = run(&["norms", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let csv = std::fs::read_to_string(out.join("norms.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((value - 1.0).abs() < 1e-12, "line {line}");
    }
}

#[test]
fn levelsets_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), FAST_GRID);
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    for out in [&first, &second] {
        let output = run(&["levelsets", "--config", &config, "--out", out.to_str().unwrap()]);
        assert_eq!(exit_code(&output), 0, "{output:?}");
    }
    let a = std::fs::read(first.join("levels.csv")).unwrap();
    let b = std::fs::read(second.join("levels.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn setup_certificates_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), FAST_GRID);
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    let output = run(&[
        "verify-setup",
        "--config",
        &config,
        "--out",
        serial.to_str().unwrap(),
        "--threads",
        "1",
    ]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let output = run(&[
        "verify-setup",
        "--config",
        &config,
        "--out",
        parallel.to_str().unwrap(),
        "--threads",
        "3",
    ]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    let a = std::fs::read(serial.join("setup.json")).unwrap();
    let b = std::fs::read(parallel.join("setup.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn command_falls_back_to_the_config_entry() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = write_config(dir.path(), "[run]\ncommand = norms\n");
    let output = run(&["--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0, "{output:?}");
    assert!(out.join("norms.csv").exists());
}

#[test]
fn missing_command_and_bad_inputs_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");

    let output = run(&["--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 1);
    assert!(String::from_utf8(output.stderr).unwrap().contains("no command"));

    let output = run(&["frobnicate", "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 1);

    let output = run(&["norms", "--config", "/nonexistent/experiment.conf"]);
    assert_eq!(exit_code(&output), 1);

    let config = write_config(dir.path(), "[grid]\nlevels 6\n");
    let output = run(&["norms", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 1);
    assert!(String::from_utf8(output.stderr).unwrap().contains("line 2"));
}

#[test]
fn failed_checks_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = write_config(
        dir.path(),
        "[grid]\nlevels = 6\nrays = 64\n\n[gap]\neps = 0.05, 0.025\n",
    );
    let output = run(&["gap", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 2, "{output:?}");
    assert!(out.join("gap.csv").exists());
    assert!(out.join("gap.json").exists());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("[FAIL] gap"));
}

#[test]
fn environment_overrides_reach_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let output = bergball()
        .args(["norms", "--out", out.to_str().unwrap()])
        .env("BBL_FUNCTION_COEFFS_RE", "1.0")
        .output()
        .unwrap();
    assert_eq!(exit_code(&output), 0);
    let csv = std::fs::read_to_string(out.join("norms.csv")).unwrap();
    assert!(csv.contains("bergman_base,1.0000000000000000e0"));
    let echo = std::fs::read_to_string(out.join("config.resolved")).unwrap();
    assert!(echo.contains("coeffs_re = 1"));
}

#[test]
fn help_and_version_exit_clean() {
    let output = run(&["--help"]);
    assert_eq!(exit_code(&output), 0);
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("selftest"));
    let output = run(&["--version"]);
    assert_eq!(exit_code(&output), 0);
}
