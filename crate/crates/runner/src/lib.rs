//! Batch experiment harness for `bergman-lab`: TOML configs, the experiment
//! registry, and CSV/JSON artifacts.

pub mod config;
pub mod error;
mod experiments;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, ExperimentId};
pub use error::{ConfigError, RunError};
pub use report::{Check, RunReport};
pub use runner::{
    output_root, resolve_output_dir, run_experiment, run_experiment_in, self_test, SelfTestOutcome, OUTPUT_ENV,
};
