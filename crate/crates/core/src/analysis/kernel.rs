use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub n: usize,
    pub alpha: f64,
}

impl KernelParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::Unsupported(format!("dimension {n}")));
        }
        if !(alpha > -1.0) {
            return Err(Error::Parameter(format!("alpha must exceed -1 (got {alpha})")));
        }
        Ok(Self { n, alpha })
    }

    /// `n + 1 + α`.
    pub fn exponent(&self) -> f64 {
        self.n as f64 + 1.0 + self.alpha
    }
}

/// `(1 − ⟨w, z⟩)^{−x}` on the principal branch (the base has positive real part).
pub fn kernel_power(z: &Point, w: &Point, x: f64) -> Complex64 {
    let base = Complex64::new(1.0, 0.0) - w.inner(z);
    if x.fract() == 0.0 && x.abs() <= 64.0 {
        // integer exponents: repeated multiplication is faster and exact in the branch
        return base.inv().powi(x as i32);
    }
    base.powf(-x)
}

/// `K^α_z(w) = (1 − ⟨w, z⟩)^{−(n+1+α)}`.
pub fn kernel_eval(kp: &KernelParams, z: &Point, w: &Point) -> Result<Complex64> {
    z.check_interior()?;
    w.check_interior()?;
    if z.dim() != kp.n || w.dim() != kp.n {
        return Err(Error::Parameter("kernel evaluated in the wrong dimension".into()));
    }
    Ok(kernel_power(z, w, kp.exponent()))
}

/// `k^α_z = K^α_z / ‖K^α_z‖_{2,α} = (1−|z|²)^{(n+1+α)/2} K^α_z`.
pub fn normalized_kernel_eval(kp: &KernelParams, z: &Point, w: &Point) -> Result<Complex64> {
    Ok(kernel_eval(kp, z, w)? * z.defect().powf(kp.exponent() / 2.0))
}
