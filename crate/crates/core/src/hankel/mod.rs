//! Hankel operators: exact truncated matrices and kernel-probe norms.

mod matrix;
mod params;
mod probes;
mod series;

pub use matrix::{truncated_matrix, TruncatedOperator, DEFAULT_POLE_DEGREE, MAX_DOMAIN};
pub use params::HankelParams;
pub use series::project_kernel_product;
pub use probes::{
    compactness_decay, g_z_eval, hankel_apply, probe_norms, projection_comparison_probe, sweep_directions,
    test_function, write_sweep_csv, ProbeResult, SweepRow, TestFunction, MAX_PROBE_RADIUS,
};
