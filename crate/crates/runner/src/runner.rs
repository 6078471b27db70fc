use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bergman_lab::quadrature::{build_quadrature, RuleSpec, SelfTestReport};

use crate::config::ExperimentConfig;
use crate::error::{RunError, RunResult};
use crate::experiments;
use crate::report::RunReport;

/// Environment variable naming the root directory for run artifacts.
pub const OUTPUT_ENV: &str = "BERGMAN_LAB_OUT";

const DEFAULT_OUTPUT_ROOT: &str = "bergman-lab-out";

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_ROOT))
}

/// Artifact directory: `output_dir` from the config (relative paths resolve
/// against the output root), else `<root>/<experiment id>`.
pub fn resolve_output_dir(cfg: &ExperimentConfig, root: &Path) -> PathBuf {
    match &cfg.output_dir {
        Some(p) if p.is_absolute() => p.clone(),
        Some(p) => root.join(p),
        None => root.join(cfg.experiment_id.to_string()),
    }
}

/// Runs under the output root taken from the environment.
pub fn run_experiment(cfg: &ExperimentConfig) -> RunResult<RunReport> {
    run_experiment_in(cfg, &resolve_output_dir(cfg, &output_root()))
}

/// Runs the experiment, writing artifacts and `report.json` into `dir`.
pub fn run_experiment_in(cfg: &ExperimentConfig, dir: &Path) -> RunResult<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = experiments::dispatch(cfg, dir)?;
    report.wall_time_s = start.elapsed().as_secs_f64();
    report.artifacts.push("report.json".into());
    let path = dir.join("report.json");
    let f = fs::File::create(&path).map_err(|source| RunError::Io { path: path.display().to_string(), source })?;
    serde_json::to_writer_pretty(f, &report)?;
    Ok(report)
}

/// Rules exercised by the `self-test` command, with the exactness degree
/// each must reach.
pub const SELF_TEST_RULES: [(usize, RuleSpec, u32); 2] = [
    (1, RuleSpec::Tensor { radial: 48, angular: 64 }, 40),
    (2, RuleSpec::Tensor { radial: 16, angular: 24 }, 20),
];

/// One self-test line: the rule's report and whether it met its degree.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SelfTestOutcome {
    pub report: SelfTestReport,
    pub required_degree: u32,
    pub passed: bool,
}

/// Quadrature self-tests of the standard rules.
pub fn self_test() -> RunResult<Vec<SelfTestOutcome>> {
    SELF_TEST_RULES
        .iter()
        .map(|&(n, spec, required_degree)| {
            let rule = experiments::num("self-test", build_quadrature(n, spec))?;
            let report = rule.self_test().clone();
            let passed = report.exactness_degree >= required_degree;
            Ok(SelfTestOutcome { report, required_degree, passed })
        })
        .collect()
}
