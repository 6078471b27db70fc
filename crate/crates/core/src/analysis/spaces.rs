use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oscillation::{omega, MetricBall};
use crate::error::{Error, Result};
use crate::function::BallFunction;
use crate::geometry::{sampling::shell_points, Lattice, Point};
use crate::quadrature::QuadratureRule;

/// Boundary shells added to every supremum estimate.
pub const SUP_SHELLS: [f64; 3] = [0.9, 0.97, 0.99];

/// Sampling policy for the space-norm estimators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSettings {
    /// Weight of the ball averages.
    pub sigma: f64,
    /// Shells whose points join the lattice centers in every supremum.
    pub sup_shells: Vec<f64>,
    /// Shells reported in the decay profile.
    pub profile_shells: Vec<f64>,
    /// Resolution passed to `shell_points`.
    pub shell_resolution: usize,
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        Self {
            sigma: 0.0,
            sup_shells: SUP_SHELLS.to_vec(),
            profile_shells: vec![0.5, 0.7, 0.9, 0.97, 0.99],
            shell_resolution: 16,
        }
    }
}

/// Estimated norms of one symbol for one `(p, γ, r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceEstimate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_id: Option<String>,
    pub p: f64,
    pub gamma: f64,
    pub r: f64,
    #[serde(rename = "bmo")]
    pub bmo_norm: f64,
    #[serde(rename = "bo")]
    pub bo_norm: f64,
    #[serde(rename = "ba")]
    pub ba_norm: f64,
    /// `(radius, shell max of (1−|z|²)^γ MO_{p,r})`.
    #[serde(rename = "profile")]
    pub decay_profile: Vec<(f64, f64)>,
}

/// Lattice centers together with the points of the supremum shells.
pub fn estimator_points(lat: Option<&Lattice>, settings: &EstimatorSettings, n: usize) -> Vec<Point> {
    let mut pts: Vec<Point> = lat.map(|l| l.centers().to_vec()).unwrap_or_default();
    if pts.is_empty() {
        pts.push(Point::origin(n));
    }
    for &s in &settings.sup_shells {
        pts.extend(shell_points(n, s, settings.shell_resolution));
    }
    pts
}

fn weighted_max<G>(points: &[Point], gamma: f64, g: G) -> Result<f64>
where
    G: Fn(&Point) -> Result<f64> + Sync,
{
    let vals: Vec<f64> =
        points.par_iter().map(|z| Ok(z.defect().powf(gamma) * g(z)?)).collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

fn mo_value<F: BallFunction + ?Sized>(f: &F, p: f64, r: f64, sigma: f64, z: &Point, rule: &QuadratureRule) -> Result<f64> {
    let ball = MetricBall::new(z, r, sigma, rule)?;
    let hat = ball.average(|w| f.eval(w))?;
    Ok(ball.average_real(|w| Ok((f.eval(w)? - hat).norm().powf(p)))?.max(0.0).powf(1.0 / p))
}

/// `max (1−|z|²)^γ MO_{p,r}(f)(z)` over the points.
pub fn bmo_estimate<F: BallFunction + ?Sized>(
    f: &F,
    p: f64,
    gamma: f64,
    r: f64,
    sigma: f64,
    points: &[Point],
    rule: &QuadratureRule,
) -> Result<f64> {
    weighted_max(points, gamma, |z| mo_value(f, p, r, sigma, z, rule))
}

/// `max (1−|z|²)^γ ω_1(f)(z)` over the points.
pub fn bo_estimate<F: BallFunction + ?Sized>(f: &F, gamma: f64, points: &[Point]) -> Result<f64> {
    weighted_max(points, gamma, |z| omega(f, 1.0, z))
}

/// `max (1−|z|²)^γ [avg_{D(z,r)} |f|^p]^{1/p}` over the points.
pub fn ba_estimate<F: BallFunction + ?Sized>(
    f: &F,
    p: f64,
    gamma: f64,
    r: f64,
    sigma: f64,
    points: &[Point],
    rule: &QuadratureRule,
) -> Result<f64> {
    weighted_max(points, gamma, |z| {
        let ball = MetricBall::new(z, r, sigma, rule)?;
        Ok(ball.average_real(|w| Ok(f.eval(w)?.norm().powf(p)))?.powf(1.0 / p))
    })
}

/// Shell maxima of `(1−|z|²)^γ MO_{p,r}(f)`.
pub fn decay_profile<F: BallFunction + ?Sized>(
    f: &F,
    p: f64,
    gamma: f64,
    r: f64,
    rule: &QuadratureRule,
    settings: &EstimatorSettings,
) -> Result<Vec<(f64, f64)>> {
    if settings.profile_shells.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Parameter("profile radii must increase".into()));
    }
    settings
        .profile_shells
        .iter()
        .map(|&s| {
            let pts = shell_points(rule.dim(), s, settings.shell_resolution);
            Ok((s, bmo_estimate(f, p, gamma, r, settings.sigma, &pts, rule)?))
        })
        .collect()
}

/// BMO, BO and BA estimates plus the VMO decay profile.
pub fn space_norm_estimate<F: BallFunction + ?Sized>(
    f: &F,
    p: f64,
    gamma: f64,
    r: f64,
    lat: Option<&Lattice>,
    rule: &QuadratureRule,
    settings: &EstimatorSettings,
) -> Result<SpaceEstimate> {
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("p must be at least 1 (got {p})")));
    }
    let points = estimator_points(lat, settings, rule.dim());
    Ok(SpaceEstimate {
        symbol_id: None,
        p,
        gamma,
        r,
        bmo_norm: bmo_estimate(f, p, gamma, r, settings.sigma, &points, rule)?,
        bo_norm: bo_estimate(f, gamma, &points)?,
        ba_norm: ba_estimate(f, p, gamma, r, settings.sigma, &points, rule)?,
        decay_profile: decay_profile(f, p, gamma, r, rule, settings)?,
    })
}

/// `f = f̂_r + (f − f̂_r)`.
pub struct BmoDecomposition<'a, F: ?Sized> {
    f: &'a F,
    r: f64,
    sigma: f64,
    rule: &'a QuadratureRule,
}

pub fn decompose_bmo<'a, F: BallFunction + ?Sized>(
    f: &'a F,
    r: f64,
    sigma: f64,
    rule: &'a QuadratureRule,
) -> Result<BmoDecomposition<'a, F>> {
    if !(r > 0.0) || !(sigma > -1.0) {
        return Err(Error::Parameter("decomposition needs r > 0 and sigma > -1".into()));
    }
    Ok(BmoDecomposition { f, r, sigma, rule })
}

impl<'a, F: BallFunction + ?Sized> BmoDecomposition<'a, F> {
    /// `f̂_r`, the oscillation part.
    pub fn average_part(&self) -> AveragePart<'_, 'a, F> {
        AveragePart(self)
    }

    /// `f − f̂_r`, the average part.
    pub fn remainder_part(&self) -> RemainderPart<'_, 'a, F> {
        RemainderPart(self)
    }

    fn hat(&self, z: &Point) -> Result<Complex64> {
        MetricBall::new(z, self.r, self.sigma, self.rule)?.average(|w| self.f.eval(w))
    }

    /// Both parts at one point from a single ball average.
    pub fn split(&self, z: &Point) -> Result<(Complex64, Complex64)> {
        let f1 = self.hat(z)?;
        Ok((f1, self.f.eval(z)? - f1))
    }
}

pub struct AveragePart<'d, 'a, F: ?Sized>(&'d BmoDecomposition<'a, F>);
pub struct RemainderPart<'d, 'a, F: ?Sized>(&'d BmoDecomposition<'a, F>);

impl<F: BallFunction + ?Sized> BallFunction for AveragePart<'_, '_, F> {
    fn eval(&self, z: &Point) -> Result<Complex64> {
        self.0.hat(z)
    }
}

impl<F: BallFunction + ?Sized> BallFunction for RemainderPart<'_, '_, F> {
    fn eval(&self, z: &Point) -> Result<Complex64> {
        Ok(self.0.split(z)?.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_lattice, sampling::uniform_ball};
    use crate::quadrature::{build_quadrature, RuleSpec};
    use crate::symbols::Symbol;

    fn ball_rule() -> QuadratureRule {
        build_quadrature(1, RuleSpec::Tensor { radial: 12, angular: 24 }).unwrap()
    }

    fn quick() -> EstimatorSettings {
        EstimatorSettings { shell_resolution: 8, ..EstimatorSettings::default() }
    }

    #[test]
    fn hyperbolic_radius_has_oscillation_below_r() {
        let lat = build_lattice(1, 0.8, 0.9).unwrap();
        let f = Symbol::named("hyperbolic", 1).unwrap();
        let est = space_norm_estimate(&f, 2.0, 0.0, 1.0, Some(&lat), &ball_rule(), &quick()).unwrap();
        assert!(est.bo_norm <= 1.0 + 1e-12, "{}", est.bo_norm);
        assert!(est.bmo_norm > 0.0);
        let v = serde_json::to_value(&est).unwrap();
        for key in ["p", "gamma", "r", "bmo", "bo", "ba", "profile"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn bounded_symbol_has_ba_below_sup() {
        let f = Symbol::named("re_z", 1).unwrap();
        let pts = estimator_points(None, &quick(), 1);
        assert!(ba_estimate(&f, 2.0, 0.0, 1.0, 0.0, &pts, &ball_rule()).unwrap() <= 1.0);
    }

    #[test]
    fn decay_profile_of_defect_decreases() {
        // at r = 1 the true profile rises between |z| = 0.5 and 0.7; small radii are monotone
        let f = Symbol::named("one_minus_abs_sq", 1).unwrap();
        let prof = decay_profile(&f, 2.0, 0.0, 0.3, &ball_rule(), &quick()).unwrap();
        assert!(prof.windows(2).all(|w| w[1].1 < w[0].1), "{prof:?}");
    }

    #[test]
    fn decomposition_is_additive() {
        let f = Symbol::named("hyperbolic", 1).unwrap();
        let rule = ball_rule();
        let d = decompose_bmo(&f, 1.0, 0.0, &rule).unwrap();
        for z in uniform_ball(1, 0.99, 200, 4) {
            let (f1, f2) = d.split(&z).unwrap();
            let fz = f.eval(&z).unwrap();
            // f1 + (f − f1) rounds back to f up to one unit in the last place
            assert!((f1 + f2 - fz).norm() <= f64::EPSILON * fz.norm().max(f1.norm()));
            assert_eq!(d.average_part().eval(&z).unwrap(), f1);
        }
        let c = Symbol::real_constant(1, 2.5);
        let dc = decompose_bmo(&c, 1.0, 0.0, &rule).unwrap();
        let (f1, f2) = dc.split(&Point::real(&[0.3]).unwrap()).unwrap();
        assert!((f1.re - 2.5).abs() < 1e-14 && f2.norm() < 1e-14);
    }
}
