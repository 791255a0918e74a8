use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hydroelastic::io::{cmd_branch, verify_file, BranchFile};
use hydroelastic::{Error, RunConfig};

const SMALL_RUN: &str = r#"
[grid]
n_nodes = 32

[continuation]
max_points = 12
"#;

fn small_config(dir: &Path) -> RunConfig {
    let mut cfg = RunConfig::from_toml_str(SMALL_RUN).unwrap();
    cfg.output_path = dir.to_string_lossy().into_owned();
    cfg
}

fn hydrowave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hydrowave")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

#[test]
fn branch_file_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_branch(&small_config(dir.path())).unwrap();
    let text = fs::read_to_string(&out.branch_file).unwrap();
    let file = BranchFile::from_json(&text).unwrap();
    assert_eq!(file.to_json().unwrap(), text);
    assert_eq!(file.points.len(), out.branch.points.len());
    let first = &file.points[1];
    assert_eq!(first.a, out.branch.points[1].state.a);
    assert_eq!(first.c, out.branch.points[1].state.c);
}

#[test]
fn verify_flags_a_corrupted_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_branch(&small_config(dir.path())).unwrap();
    let mut file = BranchFile::read(&out.branch_file).unwrap();
    let clean = verify_file(&file, 1e-9);
    assert!(clean.passed(), "{}", clean.summary());

    file.points[5].a[0] += 1e-3;
    let report = verify_file(&file, 1e-9);
    assert_eq!(report.violations, vec![5]);
    assert!(report.points[5].residual > 1e-6);
}

#[test]
fn malformed_branch_files_are_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_branch(&small_config(dir.path())).unwrap();
    let text = fs::read_to_string(&out.branch_file).unwrap();

    let truncated = &text[..text.len() / 2];
    assert!(matches!(BranchFile::from_json(truncated), Err(Error::Parse(_))));

    let wrong_format = text.replacen("hydrowave-branch-v1", "other-format", 1);
    assert!(matches!(BranchFile::from_json(&wrong_format), Err(Error::Parse(_))));

    let mut file = BranchFile::from_json(&text).unwrap();
    file.points[2].b.pop();
    let short = file.to_json().unwrap();
    assert!(matches!(BranchFile::from_json(&short), Err(Error::Parse(_))));

    assert!(matches!(BranchFile::read(&dir.path().join("missing.json")), Err(Error::Parse(_))));
}

#[test]
fn linear_command_prints_table() {
    let out = hydrowave(&["linear", "--kmax", "3"]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.trim_start().starts_with(['1', '2', '3'])).count(), 3);
    assert!(stdout.contains("1.17260393"));
}

#[test]
fn linear_command_writes_csv_with_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = hydrowave(&["linear", "--kmax", "4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("linear.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn usage_and_config_errors_exit_one() {
    assert_eq!(code(&hydrowave(&[])), 1);
    assert_eq!(code(&hydrowave(&["bogus"])), 1);
    assert_eq!(code(&hydrowave(&["linear", "--kmax", "0"])), 1);
    assert_eq!(code(&hydrowave(&["linear", "--seed-sign", "2"])), 1);
    assert_eq!(code(&hydrowave(&["linear", "--config", "/nonexistent/run.toml"])), 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[params]\nS = -1.0\ntau1 = 2.0\nA = 1.0\nAtilde = 0.2\n").unwrap();
    assert_eq!(code(&hydrowave(&["linear", "--config", bad.to_str().unwrap()])), 1);
    fs::write(&bad, "unknown_key = 3\n").unwrap();
    assert_eq!(code(&hydrowave(&["linear", "--config", bad.to_str().unwrap()])), 1);

    let corrupt = dir.path().join("branch.json");
    fs::write(&corrupt, "{ not json").unwrap();
    assert_eq!(code(&hydrowave(&["verify", corrupt.to_str().unwrap()])), 1);
    assert_eq!(code(&hydrowave(&["surface", "--out", dir.path().to_str().unwrap()])), 1);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&hydrowave(&["--help"])), 0);
    assert_eq!(code(&hydrowave(&["--version"])), 0);
}

#[test]
fn complex_seed_speed_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[params]\nS = 0.1\ntau1 = 1.0\nA = -1.0\nAtilde = 0.2\n\n[grid]\nn_nodes = 32\n").unwrap();
    let out = hydrowave(&["branch", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn branch_then_verify_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, SMALL_RUN).unwrap();
    let args = ["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()];

    let out = hydrowave(&[&["branch"], &args[..]].concat());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("termination: max_steps"));
    assert!(dir.path().join("speed_amplitude.csv").exists());
    assert!(dir.path().join("profile_00.csv").exists());

    assert_eq!(code(&hydrowave(&[&["verify"], &args[..]].concat())), 0);

    let path = dir.path().join("branch.json");
    let mut file = BranchFile::read(&path).unwrap();
    file.points[3].b[1] -= 1e-3;
    file.write(&path).unwrap();
    let out = hydrowave(&[&["verify"], &args[..]].concat());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stdout).unwrap().contains("violations (> 1e-9): 3"));
}

#[test]
fn surface_writes_one_file_per_atilde() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[grid]\nn_nodes = 32\n\n[continuation]\nmax_points = 5\n").unwrap();
    let out = hydrowave(&[
        "surface",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--atilde-list",
        "0.2,0.4",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("branch_00.json").exists());
    assert!(dir.path().join("branch_01.json").exists());
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
}
