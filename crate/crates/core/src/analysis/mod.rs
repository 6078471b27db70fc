//! Kernels, projections, Berezin transforms and mean-oscillation estimators.

mod berezin;
mod kernel;
mod oscillation;
mod projection;
mod spaces;

pub use berezin::{berezin, BerezinParams};
pub use kernel::{kernel_eval, kernel_power, normalized_kernel_eval, KernelParams};
pub use oscillation::{
    average_hat, global_oscillation_integral, mean_oscillation, omega, omega_samples, LambdaPolicy, MetricBall,
    OscillationReport, OMEGA_DIRECTIONS, OMEGA_RADII,
};
pub use projection::{project, project_quadrature, project_quadrature_batch, project_symbol};
pub use spaces::{
    ba_estimate, bmo_estimate, bo_estimate, decay_profile, decompose_bmo, estimator_points, space_norm_estimate,
    AveragePart, BmoDecomposition, EstimatorSettings, RemainderPart, SpaceEstimate, SUP_SHELLS,
};
