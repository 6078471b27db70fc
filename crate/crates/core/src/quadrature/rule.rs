use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sampling::uniform_ball, Point, MAX_DIM};
use crate::numeric::{ball_moment, gauss_legendre_unit};
use crate::symbols::multi_indices;

/// Moment errors at or below this count as exact in the self-test.
pub const EXACTNESS_TOLERANCE: f64 = 1e-10;

/// Highest total degree probed by [`QuadratureRule::self_test`].
pub const SELF_TEST_DEGREE: u32 = 40;

/// How to build a [`QuadratureRule`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleSpec {
    /// Gauss–Legendre radial nodes clustered toward the sphere times a
    /// product rule on the sphere (`n ≤ 2`).
    Tensor { radial: usize, angular: usize },
    /// Uniform random nodes with equal weights.
    MonteCarlo { count: usize, seed: u64 },
}

/// Self-test summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub n: usize,
    pub kind: String,
    pub exactness_degree: u32,
    pub worst_moment_error: f64,
}

/// Nodes and positive weights for `∫_{B_n} F dv` with `v(B_n) = 1`.
#[derive(Debug)]
pub struct QuadratureRule {
    n: usize,
    spec: RuleSpec,
    nodes: Vec<Point>,
    weights: Vec<f64>,
    report: OnceLock<SelfTestReport>,
}

impl Clone for QuadratureRule {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            spec: self.spec,
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            report: self.report.clone(),
        }
    }
}

/// Radial nodes `r = 1 − (1−u)²` with weights for `2n r^{2n−1} dr`.
fn radial_nodes(n: usize, count: usize) -> Vec<(f64, f64)> {
    let (u, w) = gauss_legendre_unit(count);
    u.iter()
        .zip(&w)
        .map(|(&u, &w)| {
            let s = 1.0 - u;
            let r = 1.0 - s * s;
            (r, w * 2.0 * s * 2.0 * n as f64 * r.powi(2 * n as i32 - 1))
        })
        .collect()
}

fn angles(count: usize) -> Vec<f64> {
    (0..count).map(|j| 2.0 * PI * (j as f64 + 0.5) / count as f64).collect()
}

pub fn build_quadrature(n: usize, spec: RuleSpec) -> Result<QuadratureRule> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(Error::Unsupported(format!("dimension {n}")));
    }
    let (nodes, weights) = match spec {
        RuleSpec::Tensor { radial, angular } => {
            if radial == 0 || angular == 0 {
                return Err(Error::Parameter("quadrature counts must be at least 1".into()));
            }
            match n {
                1 => tensor_disk(radial, angular),
                2 => tensor_ball2(radial, angular),
                _ => return Err(Error::Unsupported("tensor rules stop at n = 2; use Monte Carlo".into())),
            }
        }
        RuleSpec::MonteCarlo { count, seed } => {
            if count == 0 {
                return Err(Error::Parameter("quadrature counts must be at least 1".into()));
            }
            (uniform_ball(n, 1.0, count, seed), vec![1.0 / count as f64; count])
        }
    };
    Ok(QuadratureRule { n, spec, nodes, weights, report: OnceLock::new() })
}

fn tensor_disk(radial: usize, angular: usize) -> (Vec<Point>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(radial * angular);
    let mut weights = Vec::with_capacity(radial * angular);
    let th = angles(angular);
    for (r, wr) in radial_nodes(1, radial) {
        for &t in &th {
            let z = Complex64::from_polar(r, t);
            nodes.push(Point::from_array([z, Complex64::default(), Complex64::default()], 1));
            weights.push(wr / angular as f64);
        }
    }
    (nodes, weights)
}

/// `ζ = (√(1−s) e^{iθ₁}, √s e^{iθ₂})`: `s` is uniform on `[0, 1]` under
/// the normalized surface measure of `S³`.
fn tensor_ball2(radial: usize, angular: usize) -> (Vec<Point>, Vec<f64>) {
    let polar = (angular / 2).max(1);
    let (s_nodes, s_weights) = gauss_legendre_unit(polar);
    let th = angles(angular);
    let ang_w = 1.0 / (angular * angular) as f64;
    let mut nodes = Vec::with_capacity(radial * polar * angular * angular);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (r, wr) in radial_nodes(2, radial) {
        for (&s, &ws) in s_nodes.iter().zip(&s_weights) {
            let (a, b) = (r * (1.0 - s).sqrt(), r * s.sqrt());
            for &t1 in &th {
                for &t2 in &th {
                    nodes.push(Point::from_array(
                        [Complex64::from_polar(a, t1), Complex64::from_polar(b, t2), Complex64::default()],
                        2,
                    ));
                    weights.push(wr * ws * ang_w);
                }
            }
        }
    }
    (nodes, weights)
}

impl QuadratureRule {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> RuleSpec {
        self.spec
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self) -> &'static str {
        match self.spec {
            RuleSpec::Tensor { .. } => "tensor",
            RuleSpec::MonteCarlo { .. } => "monte_carlo",
        }
    }

    /// Same weights, nodes scaled into the ball of radius `radius`
    /// (weights still sum to one: this is the normalized measure of the small ball).
    pub fn scaled(&self, radius: f64) -> QuadratureRule {
        QuadratureRule {
            n: self.n,
            spec: self.spec,
            nodes: self.nodes.iter().map(|p| p.scale(radius)).collect(),
            weights: self.weights.clone(),
            report: OnceLock::new(),
        }
    }

    /// Largest degree with all probed monomial moments within
    /// [`EXACTNESS_TOLERANCE`]; cached.
    pub fn exactness_degree(&self) -> u32 {
        self.self_test().exactness_degree
    }

    /// Compares `∫ z^m z̄^k dv` against the closed-form moments for every
    /// monomial of total degree ≤ [`SELF_TEST_DEGREE`] when `n = 1`, and for
    /// the diagonal moments `|z^m|²` and the holomorphic monomials `z^m`
    /// when `n > 1`.
    pub fn self_test(&self) -> &SelfTestReport {
        self.report.get_or_init(|| {
            let mut worst_per_degree = vec![0.0_f64; SELF_TEST_DEGREE as usize + 1];
            for (deg, worst) in worst_per_degree.iter_mut().enumerate() {
                for (m, k) in self.probe_monomials(deg as u32) {
                    let exact = if m == k { ball_moment(self.n, &m[..self.n], 0.0) } else { 0.0 };
                    let got = self.monomial_integral(&m, &k);
                    *worst = worst.max((got - Complex64::new(exact, 0.0)).norm());
                }
            }
            let exactness_degree = worst_per_degree
                .iter()
                .position(|&e| !(e <= EXACTNESS_TOLERANCE))
                .map_or(SELF_TEST_DEGREE, |d| (d as u32).saturating_sub(1));
            SelfTestReport {
                n: self.n,
                kind: self.kind().to_string(),
                exactness_degree,
                worst_moment_error: worst_per_degree.iter().copied().fold(0.0, f64::max),
            }
        })
    }

    fn probe_monomials(&self, degree: u32) -> Vec<([u32; MAX_DIM], [u32; MAX_DIM])> {
        let zero = [0; MAX_DIM];
        if self.n == 1 {
            return (0..=degree).map(|a| ([a, 0, 0], [degree - a, 0, 0])).collect();
        }
        let mut out: Vec<_> = multi_indices(self.n, degree).into_iter().map(|m| (m, zero)).collect();
        if degree.is_multiple_of(2) && degree > 0 {
            out.extend(multi_indices(self.n, degree / 2).into_iter().map(|m| (m, m)));
        }
        out
    }

    fn monomial_integral(&self, m: &[u32; MAX_DIM], k: &[u32; MAX_DIM]) -> Complex64 {
        let vals: Vec<Complex64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| {
                let mut v = Complex64::new(w, 0.0);
                for i in 0..self.n {
                    let c = p.coord(i);
                    v *= c.powu(m[i]) * c.conj().powu(k[i]);
                }
                v
            })
            .collect();
        crate::numeric::pairwise_sum_complex(&vals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for (n, spec) in [
            (1, RuleSpec::Tensor { radial: 16, angular: 8 }),
            (2, RuleSpec::Tensor { radial: 8, angular: 6 }),
            (3, RuleSpec::MonteCarlo { count: 100, seed: 1 }),
        ] {
            let rule = build_quadrature(n, spec).unwrap();
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "{n}: {s}");
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            assert!(rule.nodes().iter().all(|p| p.norm() < 1.0));
        }
    }

    #[test]
    fn disk_rule_integrates_radial_moments() {
        let rule = build_quadrature(1, RuleSpec::Tensor { radial: 64, angular: 64 }).unwrap();
        for m in 0..=20 {
            let got: f64 = rule.nodes().iter().zip(rule.weights()).map(|(p, w)| w * p.norm_sqr().powi(m)).sum();
            assert!((got - 1.0 / (m as f64 + 1.0)).abs() < 1e-10, "m = {m}");
        }
        let report = rule.self_test();
        assert_eq!(report.exactness_degree, SELF_TEST_DEGREE);
        assert!(report.worst_moment_error < 1e-12);
    }

    #[test]
    fn exactness_degree_tracks_resolution() {
        let coarse = build_quadrature(1, RuleSpec::Tensor { radial: 4, angular: 6 }).unwrap();
        let d = coarse.exactness_degree();
        assert!((1..6).contains(&d), "{d}");
        let mc = build_quadrature(2, RuleSpec::MonteCarlo { count: 1000, seed: 3 }).unwrap();
        assert_eq!(mc.exactness_degree(), 0);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = build_quadrature(3, RuleSpec::MonteCarlo { count: 50, seed: 9 }).unwrap();
        let b = build_quadrature(3, RuleSpec::MonteCarlo { count: 50, seed: 9 }).unwrap();
        assert_eq!(a.nodes(), b.nodes());
    }

    #[test]
    fn bad_specs() {
        assert!(build_quadrature(3, RuleSpec::Tensor { radial: 4, angular: 4 }).is_err());
        assert!(build_quadrature(1, RuleSpec::Tensor { radial: 0, angular: 4 }).is_err());
        assert!(build_quadrature(1, RuleSpec::MonteCarlo { count: 0, seed: 0 }).is_err());
        assert!(build_quadrature(0, RuleSpec::MonteCarlo { count: 1, seed: 0 }).is_err());
    }

    #[test]
    fn report_json_shape() {
        let rule = build_quadrature(1, RuleSpec::Tensor { radial: 8, angular: 8 }).unwrap();
        let v: serde_json::Value = serde_json::to_value(rule.self_test()).unwrap();
        for key in ["n", "kind", "exactness_degree", "worst_moment_error"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
