use std::path::Path;
use std::process::{Command, Output};

use bergman_runner::{run_experiment_in, ExperimentConfig, ExperimentId, OUTPUT_ENV};

fn cli(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergman-lab")).args(args).env(OUTPUT_ENV, out).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("c.toml");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn list_experiments_names_all_ten() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cli(&["list-experiments"], tmp.path());
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().last().unwrap().starts_with("E10"));
}

#[test]
fn passing_run_exits_zero_and_writes_under_the_env_root() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "experiment_id = \"E1\"\nsamples = 50\n");
    let o = cli(&["run", &cfg], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let dir = tmp.path().join("E1");
    assert!(dir.join("report.json").is_file());
    assert!(dir.join("identities.csv").is_file());
}

#[test]
fn failing_check_exits_one() {
    // a Forelli-Rudin grid at (t, s) = (0.5, 0.5) is not bounded by 3 in n = 1
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "experiment_id = \"E5\"\n");
    assert_eq!(cli(&["run", &cfg], tmp.path()).status.code(), Some(1));
}

#[test]
fn bad_config_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "experiment_id = \"E4\"\nalpha = -3.0\n");
    let o = cli(&["run", &cfg], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha must exceed -1"));
    assert_eq!(cli(&["run", "/nonexistent.toml"], tmp.path()).status.code(), Some(2));
}

#[test]
fn echo_prints_a_parseable_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "experiment_id = \"E9\"\nseed = 5\n");
    let o = cli(&["run", "--echo", &cfg], tmp.path());
    assert!(o.status.success());
    let echoed = String::from_utf8(o.stdout).unwrap();
    let c = ExperimentConfig::parse(&echoed).unwrap();
    assert_eq!(c.seed, 5);
    assert_eq!(c.serialize().unwrap(), echoed);
}

#[test]
fn self_test_reports_rules() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cli(&["self-test"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for entry in v.as_array().unwrap() {
        let r = &entry["report"];
        for key in ["n", "kind", "exactness_degree", "worst_moment_error"] {
            assert!(r.get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn reruns_are_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for id in [ExperimentId::E1, ExperimentId::E10] {
        let mut cfg = ExperimentConfig::defaults(id);
        cfg.samples = cfg.samples.min(100);
        let a = run_experiment_in(&cfg, &tmp.path().join("a")).unwrap();
        let b = run_experiment_in(&cfg, &tmp.path().join("b")).unwrap();
        assert_eq!(a.checks, b.checks);
        assert_eq!(a.logged, b.logged);
        for name in &a.artifacts {
            if name != "report.json" {
                let fa = std::fs::read(tmp.path().join("a").join(name)).unwrap();
                let fb = std::fs::read(tmp.path().join("b").join(name)).unwrap();
                assert_eq!(fa, fb, "{name}");
            }
        }
    }
}
