use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::BallFunction;
use crate::geometry::Point;
use crate::numeric::weight_constant;
use crate::quadrature::{berezin_integral, QuadratureRule};

/// Parameters of `B_{c,σ}`.
///
/// With `normalized` the weight is `c_σ(1−|w|²)^σ dv`, so that the ordinary
/// transform (`c = n+1+σ`) maps `1` to `1`; otherwise the bare weight
/// `(1−|w|²)^σ dv` is used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerezinParams {
    pub sigma: f64,
    pub c: f64,
    pub normalized: bool,
}

impl BerezinParams {
    pub fn new(sigma: f64, c: f64) -> Result<Self> {
        if !(sigma > -1.0) {
            return Err(Error::Parameter(format!("sigma must exceed -1 (got {sigma})")));
        }
        if !(c > 0.0) {
            return Err(Error::Parameter(format!("c must be positive (got {c})")));
        }
        Ok(Self { sigma, c, normalized: true })
    }

    /// The ordinary transform `B_σ = B_{n+1+σ,σ}`.
    pub fn ordinary(n: usize, sigma: f64) -> Result<Self> {
        Self::new(sigma, n as f64 + 1.0 + sigma)
    }

    pub fn unnormalized(self) -> Self {
        Self { normalized: false, ..self }
    }
}

/// `B_{c,σ}φ(z) = (1−|z|²)^c ∫ φ(w) / |1−⟨w,z⟩|^{n+1+c+σ} dv_σ(w)`.
pub fn berezin<F: BallFunction + ?Sized>(bp: &BerezinParams, f: &F, z: &Point, rule: &QuadratureRule) -> Result<Complex64> {
    let scale = if bp.normalized { weight_constant(z.dim(), bp.sigma) } else { 1.0 };
    Ok(berezin_integral(rule, z, bp.sigma, bp.c, |node| f.eval(&node.w))? * scale)
}
