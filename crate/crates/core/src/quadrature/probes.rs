use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integrate::berezin_integral;
use super::QuadratureRule;
use crate::error::{Error, Result};
use crate::function::BallFunction;
use crate::geometry::{Lattice, Point};
use crate::numeric::pairwise_sum;

/// `(1−|z|²)^s ∫ (1−|w|²)^t β(z,w)^d / |1−⟨z,w⟩|^{n+1+t+s} dv(w)`.
///
/// Bounded in `z` for `t > −1`, `s > 0`, `d ≥ 0`.
pub fn forelli_rudin_probe(t: f64, s: f64, d: f64, z: &Point, rule: &QuadratureRule) -> Result<f64> {
    if !(t > -1.0) || !(s > 0.0) || !(d >= 0.0) {
        return Err(Error::Parameter(format!("requires t > -1, s > 0, d >= 0 (got t={t}, s={s}, d={d})")));
    }
    // β(z, φ_z(u)) = β(0, u)
    let v = berezin_integral(rule, z, t, s, |node| {
        let b = if d == 0.0 { 1.0 } else { node.u.norm().atanh().powf(d) };
        Ok(Complex64::new(b, 0.0))
    })?;
    Ok(v.re)
}

/// `(1−|z|²)^{s−t} Σ_k (1−|a_k|²)^t / |1−⟨z,a_k⟩|^s` over the lattice centers.
pub fn separated_sum_probe(lat: &Lattice, t: f64, s: f64, z: &Point) -> Result<f64> {
    let n = lat.dim() as f64;
    if !(n < t && t < s) {
        return Err(Error::Parameter(format!("requires n < t < s (got n={n}, t={t}, s={s})")));
    }
    if !(lat.separation() > 0.0) {
        return Err(Error::Parameter("lattice is not separated".into()));
    }
    z.check_interior()?;
    if z.dim() != lat.dim() {
        return Err(Error::Parameter("point and lattice dimensions differ".into()));
    }
    let terms: Vec<f64> = lat
        .centers()
        .par_iter()
        .map(|a| a.defect().powf(t) / (Complex64::new(1.0, 0.0) - z.inner(a)).norm().powf(s))
        .collect();
    Ok(z.defect().powf(s - t) * pairwise_sum(&terms))
}

/// Outcome of the two-condition boundedness test for `S_{b,c}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundednessVerdict {
    pub conditions_checked: Vec<(String, bool)>,
    pub overall: bool,
    pub lambda: f64,
}

/// Parameters of an `L^p_α → L^q_β` question.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ExponentPair {
    pub fn validate(&self) -> Result<()> {
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

    /// `λ = (n+1+β)/q − (n+1+α)/p`.
    pub fn lambda(&self) -> f64 {
        let n1 = self.n as f64 + 1.0;
        (n1 + self.beta) / self.q - (n1 + self.alpha) / self.p
    }
}

/// `S_{b,c}: L^p_α → L^q_β` is bounded iff `α+1 < p(b+1)` and `c ≤ n+1+b+λ`.
pub fn schur_conditions(e: &ExponentPair, b: f64, c: f64) -> Result<BoundednessVerdict> {
    e.validate()?;
    let lambda = e.lambda();
    let first = e.alpha + 1.0 < e.p * (b + 1.0);
    let second = c <= e.n as f64 + 1.0 + b + lambda;
    Ok(BoundednessVerdict {
        conditions_checked: vec![("alpha+1 < p(b+1)".into(), first), ("c <= n+1+b+lambda".into(), second)],
        overall: first && second,
        lambda,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    /// `∫ f(w)(1−|w|²)^b / |1−⟨z,w⟩|^c dv(w)`.
    S,
    /// `S` with the extra factor `β(z,w)`.
    T,
}

/// `S_{b,c} f(z)` or `T_{b,c} f(z)` by quadrature centered at `z`.
pub fn apply_integral_operator<F: BallFunction + ?Sized>(
    kind: OperatorKind,
    b: f64,
    c: f64,
    f: &F,
    z: &Point,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    if !(b > -1.0) {
        return Err(Error::Parameter(format!("operator integrand requires b > -1 (got {b})")));
    }
    // After w = φ_z(u): (1−|z|²)^{b+n+1−c} (1−|u|²)^b |1−⟨u,z⟩|^{c−2b−2n−2}.
    // In the normal form with σ = b this is exponent c_eff − b − n − 1, so c_eff = c − b − n − 1.
    let n1 = z.dim() as f64 + 1.0;
    let c_eff = c - b - n1;
    let v = berezin_integral(rule, z, b, c_eff, |node| {
        let fw = f.eval(&node.w)?;
        Ok(match kind {
            OperatorKind::S => fw,
            OperatorKind::T => fw * node.u.norm().atanh(),
        })
    })?;
    Ok(v * z.defect().powf(-c_eff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_lattice;
    use crate::quadrature::{build_quadrature, RuleSpec};
    use crate::symbols::Symbol;

    fn disk() -> QuadratureRule {
        build_quadrature(1, RuleSpec::Tensor { radial: 64, angular: 256 }).unwrap()
    }

    #[test]
    fn forelli_rudin_at_origin() {
        let rule = disk();
        let v = forelli_rudin_probe(0.0, 1.0, 0.0, &Point::origin(1), &rule).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(forelli_rudin_probe(-1.0, 1.0, 0.0, &Point::origin(1), &rule).is_err());
        assert!(forelli_rudin_probe(0.0, 0.0, 0.0, &Point::origin(1), &rule).is_err());
    }

    #[test]
    fn forelli_rudin_stays_within_factor_three() {
        let rule = disk();
        let vals: Vec<f64> = [0.0, 0.5, 0.9, 0.99]
            .iter()
            .map(|&r| forelli_rudin_probe(0.0, 1.0, 0.0, &Point::real(&[r]).unwrap(), &rule).unwrap())
            .collect();
        let (lo, hi) = vals.iter().fold((f64::MAX, 0.0_f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi / lo <= 3.0, "{vals:?}");
    }

    #[test]
    fn schur_examples() {
        let e = ExponentPair { n: 1, p: 2.0, q: 2.0, alpha: 0.0, beta: 0.0 };
        let v = schur_conditions(&e, 0.0, 2.0).unwrap();
        assert!(v.overall && v.lambda == 0.0);
        assert!(!schur_conditions(&e, 0.0, 3.0).unwrap().overall);
        let e6 = ExponentPair { alpha: 6.0, ..e };
        let v = schur_conditions(&e6, 0.0, 2.0).unwrap();
        assert_eq!(v.lambda, -3.0);
        assert!(!v.overall && !v.conditions_checked[1].1);
        let bad = ExponentPair { p: 3.0, q: 2.0, ..e };
        let err = schur_conditions(&bad, 0.0, 2.0).unwrap_err().to_string();
        assert!(err.contains("1<p≤q<∞"), "{err}");
    }

    #[test]
    fn operator_examples() {
        let rule = disk();
        let one = Symbol::real_constant(1, 1.0);
        let s = apply_integral_operator(OperatorKind::S, 0.0, 2.0, &one, &Point::origin(1), &rule).unwrap();
        assert!((s.re - 1.0).abs() < 1e-12);
        for r in [0.0, 0.4, 0.8] {
            let z = Point::real(&[r]).unwrap();
            let s = apply_integral_operator(OperatorKind::S, 1.0, 0.0, &one, &z, &rule).unwrap();
            assert!((s.re - 0.5).abs() < 1e-9, "{r}: {s}");
        }
    }

    #[test]
    fn separated_sum_requires_hypotheses() {
        let lat = build_lattice(1, 0.5, 0.9).unwrap();
        assert!(separated_sum_probe(&lat, 1.0, 3.0, &Point::origin(1)).is_err());
        assert!(separated_sum_probe(&lat, 2.0, 1.5, &Point::origin(1)).is_err());
        assert!(separated_sum_probe(&lat, 1.5, 3.0, &Point::origin(1)).unwrap() > 0.0);
    }
}
