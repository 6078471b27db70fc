use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::MAX_DIM;

/// Exponents of an `H^β_f : A^p_α → L^q_β` experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HankelParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Extra kernel exponent of the test functions `h^t_z`.
    pub t: f64,
}

impl HankelParams {
    /// Validates the exponents and picks the default `t`: zero if allowed,
    /// otherwise the least multiple of 1/2 satisfying `n+1+β+t > (n+1+α)/p`.
    pub fn new(n: usize, p: f64, q: f64, alpha: f64, beta: f64) -> Result<Self> {
        let mut hp = Self { n, p, q, alpha, beta, t: 0.0 };
        hp.validate_exponents()?;
        while !hp.kernel_hypothesis() {
            hp.t += 0.5;
        }
        Ok(hp)
    }

    pub fn with_t(self, t: f64) -> Result<Self> {
        let hp = Self { t, ..self };
        hp.validate()?;
        Ok(hp)
    }

    fn validate_exponents(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.n) {
            return Err(Error::Unsupported(format!("dimension {}", self.n)));
        }
        if !(1.0 < self.p && self.p <= self.q && self.q.is_finite()) {
            return Err(Error::Parameter(format!("requires 1<p≤q<∞ (got p={}, q={})", self.p, self.q)));
        }
        if !(self.alpha > -1.0) {
            return Err(Error::Parameter("alpha must exceed -1".into()));
        }
        if !(self.beta > -1.0) {
            return Err(Error::Parameter("beta must exceed -1".into()));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_exponents()?;
        if !(self.t >= 0.0) {
            return Err(Error::Parameter("t must be non-negative".into()));
        }
        if !self.kernel_hypothesis() {
            return Err(Error::Parameter(format!(
                "requires n+1+beta+t > (n+1+alpha)/p (got {} <= {})",
                self.kernel_exponent(),
                (self.n as f64 + 1.0 + self.alpha) / self.p
            )));
        }
        Ok(())
    }

    fn kernel_hypothesis(&self) -> bool {
        self.kernel_exponent() > (self.n as f64 + 1.0 + self.alpha) / self.p
    }

    /// `n + 1 + β + t`.
    pub fn kernel_exponent(&self) -> f64 {
        self.n as f64 + 1.0 + self.beta + self.t
    }

    /// `γ = (n+1+β)/q − (n+1+α)/p`.
    pub fn gamma(&self) -> f64 {
        let n1 = self.n as f64 + 1.0;
        (n1 + self.beta) / self.q - (n1 + self.alpha) / self.p
    }

    pub fn q_conjugate(&self) -> f64 {
        self.q / (self.q - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_and_default_t() {
        let hp = HankelParams::new(1, 2.0, 2.0, 0.0, 0.0).unwrap();
        assert_eq!((hp.gamma(), hp.t), (0.0, 0.0));
        let hp = HankelParams::new(1, 2.0, 2.0, 6.0, 0.0).unwrap();
        assert_eq!(hp.gamma(), -3.0);
        // 2 + t > 4 needs t = 2.5 on the half-integer grid
        assert_eq!(hp.t, 2.5);
        assert_eq!(HankelParams::new(1, 2.0, 4.0, 0.0, 0.0).unwrap().q_conjugate(), 4.0 / 3.0);
    }

    #[test]
    fn rejects_bad_exponents() {
        let e = HankelParams::new(1, 3.0, 2.0, 0.0, 0.0).unwrap_err().to_string();
        assert!(e.contains("1<p≤q<∞"));
        assert!(HankelParams::new(1, 2.0, 2.0, -1.0, 0.0).is_err());
        let hp = HankelParams::new(1, 2.0, 2.0, 6.0, 0.0).unwrap();
        assert!(hp.with_t(1.0).is_err());
    }
}
