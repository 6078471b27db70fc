use num_complex::Complex64;
use rayon::prelude::*;

use super::{QuadratureRule, WeightedMeasure};
use crate::error::{Error, Result};
use crate::function::BallFunction;
use crate::geometry::{MoebiusMap, Point};
use crate::numeric::{pairwise_sum, pairwise_sum_complex};

fn check_dim(rule: &QuadratureRule, n: usize) -> Result<()> {
    if rule.dim() != n {
        return Err(Error::Parameter(format!("rule of dimension {} used in dimension {n}", rule.dim())));
    }
    Ok(())
}

/// `Σ w_k F(x_k) ≈ ∫ F dv`.
pub fn integrate<F>(rule: &QuadratureRule, f: F) -> Result<Complex64>
where
    F: Fn(&Point) -> Result<Complex64> + Sync,
{
    let vals: Vec<Complex64> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights().par_iter())
        .map(|(p, &w)| Ok(f(p)? * w))
        .collect::<Result<_>>()?;
    Ok(pairwise_sum_complex(&vals))
}

pub fn integrate_real<F>(rule: &QuadratureRule, f: F) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64> + Sync,
{
    let vals: Vec<f64> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights().par_iter())
        .map(|(p, &w)| Ok(f(p)? * w))
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&vals))
}

/// `∫ F dμ` for a weighted measure.
pub fn integrate_weighted<F>(rule: &QuadratureRule, measure: &WeightedMeasure, f: F) -> Result<Complex64>
where
    F: Fn(&Point) -> Result<Complex64> + Sync,
{
    check_dim(rule, measure.dim())?;
    integrate(rule, |p| Ok(f(p)? * measure.density(p)))
}

/// A rule node `u` pushed to `w = φ_z(u)`.
#[derive(Clone, Copy, Debug)]
pub struct CenteredNode {
    pub u: Point,
    pub w: Point,
    /// `1 − |w|²` from the defect identity (no cancellation).
    pub w_defect: f64,
    /// `1 − ⟨u, z⟩`.
    pub pairing: Complex64,
    /// Real Jacobian `((1−|z|²)/|1−⟨u,z⟩|²)^{n+1}` of `φ_z`.
    pub jacobian: f64,
}

fn centered_nodes(rule: &QuadratureRule, z: &Point) -> Result<(MoebiusMap, f64)> {
    check_dim(rule, z.dim())?;
    Ok((MoebiusMap::new(*z)?, z.defect()))
}

fn centered_node(map: &MoebiusMap, z: &Point, z_defect: f64, u: &Point) -> CenteredNode {
    let pairing = Complex64::new(1.0, 0.0) - u.inner(z);
    let q = z_defect / pairing.norm_sqr();
    CenteredNode {
        u: *u,
        w: map.apply_unchecked(u),
        w_defect: q * u.defect(),
        pairing,
        jacobian: q.powi(z.dim() as i32 + 1),
    }
}

/// `∫ F dv` after the substitution `w = φ_z(u)`; `F` receives the node
/// data, and the Jacobian is applied here.
pub fn integrate_centered<F>(rule: &QuadratureRule, z: &Point, f: F) -> Result<Complex64>
where
    F: Fn(&CenteredNode) -> Result<Complex64> + Sync,
{
    let (map, zd) = centered_nodes(rule, z)?;
    integrate(rule, |u| {
        let node = centered_node(&map, z, zd, u);
        Ok(f(&node)? * node.jacobian)
    })
}

/// `∫ F(φ_z(u)) (1−|u|²)^σ |1−⟨u,z⟩|^{c−σ−n−1} dv(u)`.
///
/// Equals `(1−|z|²)^c ∫ F(w) (1−|w|²)^σ / |1−⟨w,z⟩|^{n+1+c+σ} dv(w)`; every
/// Berezin-type integral reduces to this form with no large factors.
pub fn berezin_integral<F>(rule: &QuadratureRule, z: &Point, sigma: f64, c: f64, f: F) -> Result<Complex64>
where
    F: Fn(&CenteredNode) -> Result<Complex64> + Sync,
{
    let (map, zd) = centered_nodes(rule, z)?;
    let exponent = c - sigma - z.dim() as f64 - 1.0;
    integrate(rule, |u| {
        let node = centered_node(&map, z, zd, u);
        let weight = u.defect().powf(sigma) * node.pairing.norm().powf(exponent);
        Ok(f(&node)? * weight)
    })
}

/// `‖f‖_{p,α} = (∫ |f|^p dv_α)^{1/p}` (or against the unnormalized weight).
pub fn lp_norm<F: BallFunction + ?Sized>(f: &F, p: f64, measure: &WeightedMeasure, rule: &QuadratureRule) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("p must be positive (got {p})")));
    }
    check_dim(rule, measure.dim())?;
    let v = integrate_real(rule, |w| Ok(f.eval(w)?.norm().powf(p) * measure.density(w)))?;
    Ok(v.powf(1.0 / p))
}
