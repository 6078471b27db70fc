//! Weighted measures, quadrature rules and integral-operator probes.

mod integrate;
mod measure;
mod probes;
mod rule;

pub use integrate::{
    berezin_integral, integrate, integrate_centered, integrate_real, integrate_weighted, lp_norm, CenteredNode,
};
pub use measure::{normalization_constant, WeightedMeasure};
pub use probes::{
    apply_integral_operator, forelli_rudin_probe, schur_conditions, separated_sum_probe, BoundednessVerdict,
    ExponentPair, OperatorKind,
};
pub use rule::{build_quadrature, QuadratureRule, RuleSpec, SelfTestReport, EXACTNESS_TOLERANCE, SELF_TEST_DEGREE};
