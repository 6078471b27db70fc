use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::BallFunction;
use crate::geometry::{sampling::sphere_directions, MoebiusMap, Point};
use crate::numeric::{pairwise_sum, pairwise_sum_complex};
use crate::quadrature::{berezin_integral, QuadratureRule};

/// Directions and radii sampled for `ω_r`.
pub const OMEGA_DIRECTIONS: usize = 64;
pub const OMEGA_RADII: usize = 8;
const OMEGA_SEED: u64 = 0x0b5e_55ed;

/// The metric ball `D(z, r)` discretized for `dv_σ`-averages: rule nodes in
/// the Euclidean ball of radius `tanh r` pushed through `φ_z`, with weights
/// normalized to sum to one.
#[derive(Clone, Debug)]
pub struct MetricBall {
    z: Point,
    r: f64,
    sigma: f64,
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl MetricBall {
    /// `rule` is a rule on the unit ball; it is rescaled here.
    pub fn new(z: &Point, r: f64, sigma: f64, rule: &QuadratureRule) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Parameter(format!("radius must be positive (got {r})")));
        }
        if !(sigma > -1.0) {
            return Err(Error::Parameter(format!("sigma must exceed -1 (got {sigma})")));
        }
        if rule.dim() != z.dim() {
            return Err(Error::Parameter("rule and point dimensions differ".into()));
        }
        let map = MoebiusMap::new(*z)?;
        let radius = r.tanh();
        let n1 = z.dim() as f64 + 1.0;
        let mut points = Vec::with_capacity(rule.len());
        let mut raw = Vec::with_capacity(rule.len());
        for (x, &w) in rule.nodes().iter().zip(rule.weights()) {
            let u = x.scale(radius);
            let pairing = (Complex64::new(1.0, 0.0) - u.inner(z)).norm_sqr();
            // (1−|w|²)^σ × Jacobian, up to the constant (1−|z|²)^{σ+n+1}
            raw.push(w * u.defect().powf(sigma) * pairing.powf(-(sigma + n1)));
            points.push(map.apply_unchecked(&u));
        }
        let total = pairwise_sum(&raw);
        let weights = raw.into_iter().map(|w| w / total).collect();
        Ok(Self { z: *z, r, sigma, points, weights })
    }

    pub fn center(&self) -> &Point {
        &self.z
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `dv_σ`-average of `F` over the ball.
    pub fn average<F>(&self, f: F) -> Result<Complex64>
    where
        F: Fn(&Point) -> Result<Complex64> + Sync,
    {
        let vals: Vec<Complex64> = self
            .points
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(p, &w)| Ok(f(p)? * w))
            .collect::<Result<_>>()?;
        Ok(pairwise_sum_complex(&vals))
    }

    pub fn average_real<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&Point) -> Result<f64> + Sync,
    {
        let vals: Vec<f64> = self
            .points
            .par_iter()
            .zip(self.weights.par_iter())
            .map(|(p, &w)| Ok(f(p)? * w))
            .collect::<Result<_>>()?;
        Ok(pairwise_sum(&vals))
    }
}

/// `f̂_r(z)`: the `dv_σ`-average of `f` over `D(z, r)`.
pub fn average_hat<F: BallFunction + ?Sized>(f: &F, r: f64, sigma: f64, z: &Point, rule: &QuadratureRule) -> Result<Complex64> {
    MetricBall::new(z, r, sigma, rule)?.average(|w| f.eval(w))
}

/// Points where `ω_r` is sampled: 64 directions × 8 radii inside `D(z, r)`.
pub fn omega_samples(z: &Point, r: f64) -> Result<Vec<Point>> {
    let map = MoebiusMap::new(*z)?;
    let n = z.dim();
    let dirs: Vec<Point> = if n == 1 {
        (0..OMEGA_DIRECTIONS)
            .map(|j| Point::vector(&[Complex64::from_polar(1.0, 2.0 * PI * j as f64 / OMEGA_DIRECTIONS as f64)]))
            .collect::<Result<_>>()?
    } else {
        sphere_directions(n, OMEGA_DIRECTIONS, OMEGA_SEED)
    };
    let radius = r.tanh();
    let mut out = Vec::with_capacity(OMEGA_DIRECTIONS * OMEGA_RADII);
    for k in 1..=OMEGA_RADII {
        let rho = radius * k as f64 / OMEGA_RADII as f64;
        out.extend(dirs.iter().map(|d| map.apply_unchecked(&d.scale(rho))));
    }
    Ok(out)
}

/// Sampled lower bound for `ω_r(f)(z) = sup{|f(z) − f(w)| : w ∈ D(z,r)}`.
pub fn omega<F: BallFunction + ?Sized>(f: &F, r: f64, z: &Point) -> Result<f64> {
    let fz = f.eval(z)?;
    let vals: Vec<f64> =
        omega_samples(z, r)?.par_iter().map(|w| Ok((f.eval(w)? - fz).norm())).collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

/// Which constant the oscillation was compared against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LambdaPolicy {
    /// `f̂_r(z)`.
    Average,
    /// `f(z)`.
    PointValue,
    Supplied([f64; 2]),
}

#[derive(Clone, Debug, Serialize)]
pub struct OscillationReport {
    pub z: Point,
    pub r: f64,
    pub sigma: f64,
    pub p: f64,
    pub hat_f_r: Complex64,
    /// `MO_{p,r}(f)(z)`, always measured from `f̂_r(z)`.
    pub mo_p_r: f64,
    pub omega_r: f64,
    pub lambda_policy: LambdaPolicy,
    pub lambda_z: Complex64,
    /// `[avg |f − λ_z|^p]^{1/p}`; never less than `MO/2`.
    pub lambda_deviation: f64,
}

pub fn mean_oscillation<F: BallFunction + ?Sized>(
    f: &F,
    p: f64,
    r: f64,
    sigma: f64,
    z: &Point,
    rule: &QuadratureRule,
    policy: LambdaPolicy,
) -> Result<OscillationReport> {
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("p must be at least 1 (got {p})")));
    }
    let ball = MetricBall::new(z, r, sigma, rule)?;
    let values: Vec<Complex64> = ball.points.par_iter().map(|w| f.eval(w)).collect::<Result<_>>()?;
    let deviation = |center: Complex64| {
        let terms: Vec<f64> =
            values.iter().zip(&ball.weights).map(|(v, w)| w * (v - center).norm().powf(p)).collect();
        pairwise_sum(&terms).max(0.0).powf(1.0 / p)
    };
    let weighted: Vec<Complex64> = values.iter().zip(&ball.weights).map(|(v, w)| v * w).collect();
    let hat = pairwise_sum_complex(&weighted);
    let mo = deviation(hat);
    let lambda_z = match policy {
        LambdaPolicy::Average => hat,
        LambdaPolicy::PointValue => f.eval(z)?,
        LambdaPolicy::Supplied([re, im]) => Complex64::new(re, im),
    };
    let lambda_deviation = if policy == LambdaPolicy::Average { mo } else { deviation(lambda_z) };
    Ok(OscillationReport {
        z: *z,
        r,
        sigma,
        p,
        hat_f_r: hat,
        mo_p_r: mo,
        omega_r: omega(f, r, z)?,
        lambda_policy: policy,
        lambda_z,
        lambda_deviation,
    })
}

/// `(1−|z|²)^{c+γp} ∫ |f(w) − λ|^p / |1−⟨z,w⟩|^{n+1+c+σ} (1−|w|²)^σ dv(w)`.
#[allow(clippy::too_many_arguments)]
pub fn global_oscillation_integral<F: BallFunction + ?Sized>(
    f: &F,
    p: f64,
    gamma: f64,
    c: f64,
    sigma: f64,
    z: &Point,
    center_value: Complex64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let gp = gamma * p;
    if !(sigma > (-1.0_f64).max(-1.0 + gp)) {
        return Err(Error::Parameter(format!("requires sigma > max(-1, -1+gamma*p) (got sigma={sigma})")));
    }
    if !(c > 0.0_f64.max(-2.0 * gp)) {
        return Err(Error::Parameter(format!("requires c > max(0, -2*gamma*p) (got c={c})")));
    }
    let v = berezin_integral(rule, z, sigma, c, |node| {
        Ok(Complex64::new((f.eval(&node.w)? - center_value).norm().powf(p), 0.0))
    })?;
    Ok(z.defect().powf(gp) * v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{build_quadrature, RuleSpec};
    use crate::symbols::Symbol;

    fn ball_rule() -> QuadratureRule {
        build_quadrature(1, RuleSpec::Tensor { radial: 24, angular: 48 }).unwrap()
    }

    #[test]
    fn constants_have_no_oscillation() {
        let f = Symbol::constant(1, Complex64::new(2.0, -1.0));
        let z = Point::real(&[0.6]).unwrap();
        let rep = mean_oscillation(&f, 2.0, 1.0, 0.0, &z, &ball_rule(), LambdaPolicy::Average).unwrap();
        assert!((rep.hat_f_r - Complex64::new(2.0, -1.0)).norm() < 1e-14);
        assert!(rep.mo_p_r < 1e-14 && rep.omega_r == 0.0);
    }

    #[test]
    fn real_part_at_origin_matches_disk_moment() {
        // mean of (Re w)² over |w| < ρ is ρ²/4
        let f = Symbol::named("re_z", 1).unwrap();
        let rep = mean_oscillation(&f, 2.0, 1.0, 0.0, &Point::origin(1), &ball_rule(), LambdaPolicy::Average).unwrap();
        let rho = 1.0_f64.tanh();
        assert!(rep.hat_f_r.norm() < 1e-14);
        assert!((rep.mo_p_r - rho / 2.0).abs() < 1e-12, "{}", rep.mo_p_r);
        // ω over D(0, 1) for Re w is tanh 1
        assert!((rep.omega_r - rho).abs() < 1e-12);
    }

    #[test]
    fn lambda_deviation_bounds_oscillation() {
        let f = Symbol::named("hyperbolic", 1).unwrap();
        let z = Point::real(&[0.8]).unwrap();
        for policy in [LambdaPolicy::PointValue, LambdaPolicy::Supplied([0.0, 0.0])] {
            let rep = mean_oscillation(&f, 2.0, 1.0, 0.0, &z, &ball_rule(), policy).unwrap();
            assert!(rep.mo_p_r <= 2.0 * rep.lambda_deviation);
            assert!(rep.mo_p_r <= rep.lambda_deviation + 1e-15);
        }
    }

    #[test]
    fn global_integral_hypotheses() {
        let rule = ball_rule();
        let f = Symbol::named("z", 1).unwrap();
        let z = Point::real(&[0.5]).unwrap();
        assert!(global_oscillation_integral(&f, 2.0, 0.0, 0.0, 0.0, &z, f.eval(&z).unwrap(), &rule).is_err());
        assert!(global_oscillation_integral(&f, 2.0, 1.0, 2.0, 0.5, &z, f.eval(&z).unwrap(), &rule).is_err());
        let one = Symbol::real_constant(1, 3.0);
        let v = global_oscillation_integral(&one, 2.0, 0.0, 2.0, 0.0, &z, Complex64::new(3.0, 0.0), &rule).unwrap();
        assert_eq!(v, 0.0);
    }
}
