use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        })
    }
}

/// One named comparison of a measured value against a threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, relation: Relation::AtMost, threshold, passed: value <= threshold }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, relation: Relation::AtLeast, threshold, passed: value >= threshold }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {:.6e} {} {:.6e}",
            if self.passed { "pass" } else { "FAIL" },
            self.name,
            self.value,
            self.relation,
            self.threshold
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment_id: ExperimentId,
    pub config: ExperimentConfig,
    pub checks: Vec<Check>,
    /// Informational values that carry no threshold (empirical constants, ratios).
    pub logged: BTreeMap<String, f64>,
    pub artifacts: Vec<String>,
    pub passed: bool,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            experiment_id: config.experiment_id,
            config: config.clone(),
            checks: Vec::new(),
            logged: BTreeMap::new(),
            artifacts: Vec::new(),
            passed: true,
            wall_time_s: 0.0,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn log(&mut self, key: impl Into<String>, value: f64) {
        self.logged.insert(key.into(), value);
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// 17 significant digits, so CSV regressions diff cleanly.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
