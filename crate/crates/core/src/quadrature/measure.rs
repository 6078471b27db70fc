use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, MAX_DIM};
use crate::numeric::weight_constant;

/// `(1−|z|²)^α dv(z)`, optionally scaled by `c_α` to have mass one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedMeasure {
    n: usize,
    alpha: f64,
    normalized: bool,
    c_alpha: f64,
}

impl WeightedMeasure {
    /// The probability measure `dv_α = c_α (1−|z|²)^α dv`.
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        Ok(Self { n, alpha, normalized: true, c_alpha: normalization_constant(n, alpha)? })
    }

    /// The plain weight `(1−|z|²)^α dv` without the constant.
    pub fn unnormalized(n: usize, alpha: f64) -> Result<Self> {
        Ok(Self { normalized: false, ..Self::new(n, alpha)? })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }

    /// Constant in front of `(1−|z|²)^α`.
    pub fn scale(&self) -> f64 {
        if self.normalized {
            self.c_alpha
        } else {
            1.0
        }
    }

    /// Density with respect to the normalized volume `dv`.
    pub fn density(&self, z: &Point) -> f64 {
        self.scale() * z.defect().powf(self.alpha)
    }

    pub fn mass(&self) -> f64 {
        if self.normalized {
            1.0
        } else {
            1.0 / self.c_alpha
        }
    }
}

/// `c_α = 1 / ∫(1−|z|²)^α dv(z) = Γ(n+α+1) / (n! Γ(α+1))`.
pub fn normalization_constant(n: usize, alpha: f64) -> Result<f64> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(Error::Unsupported(format!("dimension {n}")));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must exceed -1 (got {alpha})")));
    }
    Ok(weight_constant(n, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((normalization_constant(1, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((normalization_constant(1, 1.0).unwrap() - 2.0).abs() < 1e-13);
        assert!((normalization_constant(2, 1.0).unwrap() - 3.0).abs() < 1e-13);
        assert!(matches!(normalization_constant(1, -1.0), Err(Error::Domain(_))));
        assert!(normalization_constant(4, 0.0).is_err());
    }

    #[test]
    fn unnormalized_mass() {
        let m = WeightedMeasure::unnormalized(1, 1.0).unwrap();
        assert!((m.mass() - 0.5).abs() < 1e-14);
        assert_eq!(m.density(&Point::origin(1)), 1.0);
        assert!((WeightedMeasure::new(1, 1.0).unwrap().density(&Point::origin(1)) - 2.0).abs() < 1e-13);
    }
}
