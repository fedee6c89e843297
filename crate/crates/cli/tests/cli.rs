//! End-to-end checks of the command-line interface: exit codes, artifacts,
//! diagnostics, reproducibility.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn teqkd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_teqkd"))
}

fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run_with_out(config: &Path, out: &Path, extra: &[&str]) -> Output {
    teqkd()
        .arg("run")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary runs")
}

#[test]
fn clean_run_exits_zero_with_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_out(&repo_config("baseline.cfg"), dir.path(), &["--omniscient"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict = clean"), "stdout: {stdout}");
    for name in [
        "events.log",
        "transcript.log",
        "summary.txt",
        "summary.csv",
        "histogram.csv",
        "key_A.hex",
        "key_B.hex",
    ] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let key_a = fs::read_to_string(dir.path().join("key_A.hex")).unwrap();
    let key_b = fs::read_to_string(dir.path().join("key_B.hex")).unwrap();
    assert_eq!(key_a, key_b, "honest keys must agree");
}

#[test]
fn quiet_run_prints_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_out(&repo_config("baseline.cfg"), dir.path(), &["--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    // No omniscient flag: no key material on disk.
    assert!(!dir.path().join("key_A.hex").exists());
}

#[test]
fn eavesdropped_run_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_out(&repo_config("eavesdropper.cfg"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict = compromised"), "stdout: {stdout}");
}

#[test]
fn starved_run_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = fs::read_to_string(repo_config("baseline.cfg")).unwrap();
    config = config.replace("n_rounds = 200", "n_rounds = 1");
    // A dead wide detector guarantees the single round cannot fire.
    config = config.replace(
        "party_a.wide.bandwidth = 1e9",
        "party_a.wide.bandwidth = 1e9\nparty_a.wide.efficiency = 0\n\
         party_a.narrow_low.efficiency = 0\nparty_a.narrow_high.efficiency = 0",
    );
    let path = dir.path().join("starved.cfg");
    fs::write(&path, config).unwrap();
    let out = run_with_out(&path, &dir.path().join("out"), &[]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn invalid_config_exits_one_listing_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.cfg");
    fs::write(
        &path,
        "source.sum_frequency = -1\nparty_a.p_wide = 2\nunknown.knob = 3\n",
    )
    .unwrap();
    let out = run_with_out(&path, &dir.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("required key is missing"),
        "stderr: {stderr}"
    );
    assert!(stderr.contains("unknown key"), "stderr: {stderr}");
}

#[test]
fn missing_file_exits_one() {
    let out = teqkd().arg("run").arg("no-such-file.cfg").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn identical_seeds_give_byte_identical_logs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let out = run_with_out(&repo_config("eavesdropper.cfg"), dir.path(), &["--quiet"]);
        assert_eq!(out.status.code(), Some(2));
    }
    let logs: Vec<Vec<u8>> = dirs
        .iter()
        .map(|d| fs::read(d.path().join("events.log")).unwrap())
        .collect();
    assert_eq!(logs[0], logs[1]);
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = fs::read_to_string(repo_config("sweep_p_wide.cfg")).unwrap();
    // Keep the CI-side sweep small; the shipped file is sized for real use.
    config = config.replace(
        "sweep.values = 0.1, 0.3, 0.5, 0.7, 0.9",
        "sweep.values = 0.2, 0.8",
    );
    config = config.replace("sweep.trials = 200", "sweep.trials = 15");
    let path = dir.path().join("sweep.cfg");
    fs::write(&path, config).unwrap();
    let out = teqkd()
        .arg("sweep")
        .arg(&path)
        .arg("--out")
        .arg(dir.path())
        .arg("--quiet")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "parameter,value,key_rate,detection_probability,false_positive_rate,eve_accuracy,eve_mean_delay_s"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn sweep_without_block_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = teqkd()
        .arg("sweep")
        .arg(repo_config("baseline.cfg"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("no sweep block"), "stderr: {stderr}");
}
