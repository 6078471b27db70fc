use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::series::project_kernel_product;
use super::HankelParams;
use crate::analysis::{kernel_power, project, project_quadrature, project_symbol, KernelParams};
use crate::error::{Error, Result};
use crate::function::BallFunction;
use crate::geometry::{sampling::sphere_directions, Point};
use crate::numeric::weight_constant;
use crate::quadrature::{berezin_integral, integrate_centered, lp_norm, QuadratureRule, WeightedMeasure};
use crate::symbols::Symbol;

/// Probes closer to the sphere than this are refused.
pub const MAX_PROBE_RADIUS: f64 = 0.997;

const UNIT_NORM_TOLERANCE: f64 = 1e-6;

const DIRECTION_SEED: u64 = 0xd1ec_7105;

/// `∫ |F(w)|^q |K(w)|^q dv_β(w)` with `K = (1−⟨w,z⟩)^{−λ}`, in Berezin form.
fn kernel_weighted_power<F>(q: f64, lambda: f64, beta: f64, z: &Point, rule: &QuadratureRule, f: F) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64> + Sync,
{
    let n1 = z.dim() as f64 + 1.0;
    let c = q * lambda - n1 - beta;
    if !(c > 0.0) {
        return Err(Error::Parameter("kernel power is not integrable".into()));
    }
    let v = berezin_integral(rule, z, beta, c, |node| Ok(Complex64::new(f(&node.w)?.powf(q), 0.0)))?;
    Ok(weight_constant(z.dim(), beta) * z.defect().powf(-c) * v.re)
}

/// `h^t_z = K^{β,t}_z / ‖K^{β,t}_z‖_{p,α}`.
#[derive(Clone, Debug)]
pub struct TestFunction {
    z: Point,
    lambda: f64,
    norm: f64,
}

impl TestFunction {
    pub fn new(hp: &HankelParams, z: &Point, rule: &QuadratureRule) -> Result<Self> {
        hp.validate()?;
        z.check_interior()?;
        let lambda = hp.kernel_exponent();
        let norm = kernel_weighted_power(hp.p, lambda, hp.alpha, z, rule, |_| Ok(1.0))?.powf(1.0 / hp.p);
        let h = Self { z: *z, lambda, norm };
        let check = h.unit_norm(hp, rule)?;
        if (check - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(Error::Evaluation(format!("test function norm self-check gave {check}")));
        }
        Ok(h)
    }

    /// `‖h‖_{p,α}` through a plain centred integral, independent of the
    /// normalizing computation.
    pub fn unit_norm(&self, hp: &HankelParams, rule: &QuadratureRule) -> Result<f64> {
        let measure = WeightedMeasure::new(hp.n, hp.alpha)?;
        let v = integrate_centered(rule, &self.z, |node| {
            Ok(Complex64::new(self.eval(&node.w)?.norm().powf(hp.p) * measure.density(&node.w), 0.0))
        })?;
        Ok(v.re.powf(1.0 / hp.p))
    }

    pub fn center(&self) -> &Point {
        &self.z
    }

    /// `‖K^{β,t}_z‖_{p,α}`.
    pub fn kernel_norm(&self) -> f64 {
        self.norm
    }

    pub fn exponent(&self) -> f64 {
        self.lambda
    }
}

impl BallFunction for TestFunction {
    fn eval(&self, w: &Point) -> Result<Complex64> {
        Ok(kernel_power(&self.z, w, self.lambda) / self.norm)
    }
}

pub fn test_function(hp: &HankelParams, z: &Point, rule: &QuadratureRule) -> Result<TestFunction> {
    TestFunction::new(hp, z, rule)
}

/// `‖F h‖_{q,β}` for a multiplier `F`.
fn weighted_test_norm<F>(hp: &HankelParams, h: &TestFunction, rule: &QuadratureRule, f: F) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64> + Sync,
{
    let v = kernel_weighted_power(hp.q, h.lambda, hp.beta, &h.z, rule, f)?;
    Ok(v.max(0.0).powf(1.0 / hp.q) / h.norm)
}

/// Pluriharmonic symbols with `t = 0` admit closed forms: `H_f h = (B̄ − conj B(z)) h`.
fn closed_form_split(f: &Symbol, hp: &HankelParams) -> Option<(Symbol, Symbol)> {
    if hp.t == 0.0 {
        f.pluriharmonic_split()
    } else {
        None
    }
}

/// `g_z(w) = P_β(f̄ h^t_z)(w) / h^t_z(w)`.
pub fn g_z_eval(f: &Symbol, hp: &HankelParams, z: &Point, w: &Point, rule: &QuadratureRule) -> Result<Complex64> {
    let h = TestFunction::new(hp, z, rule)?;
    g_z_with(f, hp, &h, w, rule)
}

fn g_z_with(f: &Symbol, hp: &HankelParams, h: &TestFunction, w: &Point, rule: &QuadratureRule) -> Result<Complex64> {
    if let Some((a, b)) = closed_form_split(f, hp) {
        // P_β(conj(A) K_z) = conj(A(z)) K_z, P_β(B K_z) = B K_z
        return Ok(a.eval(&h.z)?.conj() + b.eval(w)?);
    }
    let fbar = f.conj();
    Ok(project_times_kernel(&fbar, hp, h, w, rule)? / h.eval(w)?)
}

/// `P_β(f h)(w)`: exact series for log-free symbols, quadrature otherwise.
fn project_times_kernel(f: &Symbol, hp: &HankelParams, h: &TestFunction, w: &Point, rule: &QuadratureRule) -> Result<Complex64> {
    if f.is_moment_class() {
        return Ok(project_kernel_product(f, hp.beta, &h.z, h.lambda, w)? / h.norm);
    }
    let kp = KernelParams::new(hp.n, hp.beta)?;
    let product = |u: &Point| Ok(f.eval(u)? * h.eval(u)?);
    project_quadrature(&kp, &product, w, rule)
}

/// `H^β_f g(z) = f(z)g(z) − P_β(fg)(z)`.
pub fn hankel_apply(f: &Symbol, beta: f64, g: &Symbol, z: &Point, rule: &QuadratureRule) -> Result<Complex64> {
    let fg = f * g;
    let kp = KernelParams::new(f.dim(), beta)?;
    Ok(fg.eval(z)? - project(&kp, &fg, z, rule)?)
}

/// Norms of one probe at `z`.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    pub z: Point,
    /// `‖H^β_f h^t_z‖_{q,β}`.
    pub probe_f: f64,
    /// `‖H^β_{f̄} h^t_z‖_{q,β}`.
    pub probe_fbar: f64,
    /// `MO_{β,q,t} f(z) = ‖f h^t_z − conj(g_z(z)) h^t_z‖_{q,β}`.
    pub mo_bqt: f64,
    pub g_z_at_z: Complex64,
}

impl ProbeResult {
    /// `mo_bqt / (probe_f + probe_fbar)`, or `None` when both probes vanish.
    pub fn necessity_ratio(&self) -> Option<f64> {
        let d = self.probe_f + self.probe_fbar;
        (d > 0.0).then(|| self.mo_bqt / d)
    }
}

/// `‖H^β_f h‖_{q,β}` with the outer rule centred at `z`.
fn nested_hankel_norm(f: &Symbol, hp: &HankelParams, h: &TestFunction, rule: &QuadratureRule) -> Result<f64> {
    let measure = WeightedMeasure::new(hp.n, hp.beta)?;
    let v = integrate_centered(rule, &h.z, |node| {
        let w = &node.w;
        let hf = f.eval(w)? * h.eval(w)? - project_times_kernel(f, hp, h, w, rule)?;
        Ok(Complex64::new(hf.norm().powf(hp.q) * measure.density(w), 0.0))
    })?;
    Ok(v.re.max(0.0).powf(1.0 / hp.q))
}

pub fn probe_norms(f: &Symbol, hp: &HankelParams, z: &Point, rule: &QuadratureRule) -> Result<ProbeResult> {
    if z.norm() > MAX_PROBE_RADIUS {
        return Err(Error::Domain(format!("probe at |z| = {} is too close to the sphere", z.norm())));
    }
    let h = TestFunction::new(hp, z, rule)?;
    if let Some((a, b)) = closed_form_split(f, hp) {
        let (az, bz) = (a.eval(z)?, b.eval(z)?);
        let probe_f = weighted_test_norm(hp, &h, rule, |w| Ok((b.eval(w)? - bz).norm()))?;
        let probe_fbar = weighted_test_norm(hp, &h, rule, |w| Ok((a.eval(w)? - az).norm()))?;
        let fz = f.eval(z)?;
        let mo_bqt = weighted_test_norm(hp, &h, rule, |w| Ok((f.eval(w)? - fz).norm()))?;
        return Ok(ProbeResult { z: *z, probe_f, probe_fbar, mo_bqt, g_z_at_z: fz.conj() });
    }
    let probe_f = if f.is_holomorphic() { 0.0 } else { nested_hankel_norm(f, hp, &h, rule)? };
    let fbar = f.conj();
    let probe_fbar = if fbar.is_holomorphic() { 0.0 } else { nested_hankel_norm(&fbar, hp, &h, rule)? };
    let g = g_z_with(f, hp, &h, z, rule)?;
    let mo_bqt = weighted_test_norm(hp, &h, rule, |w| Ok((f.eval(w)? - g.conj()).norm()))?;
    Ok(ProbeResult { z: *z, probe_f, probe_fbar, mo_bqt, g_z_at_z: g })
}

/// One row of a compactness sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub radius: f64,
    /// 0 is `e_1`; 1..=8 are the sampled boundary directions.
    pub direction_index: usize,
    pub result: ProbeResult,
}

/// `e_1` followed by eight boundary directions.
pub fn sweep_directions(n: usize) -> Result<Vec<Point>> {
    let mut e1 = vec![Complex64::new(0.0, 0.0); n];
    e1[0] = Complex64::new(1.0, 0.0);
    let mut out = vec![Point::vector(&e1)?];
    if n == 1 {
        for k in 0..8 {
            out.push(Point::vector(&[Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / 8.0)])?);
        }
    } else {
        out.extend(sphere_directions(n, 8, DIRECTION_SEED));
    }
    Ok(out)
}

/// Probe sweep along `e_1` and eight boundary directions.
pub fn compactness_decay(f: &Symbol, hp: &HankelParams, radii: &[f64], rule: &QuadratureRule) -> Result<Vec<SweepRow>> {
    if radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Parameter("sweep radii must increase".into()));
    }
    let dirs = sweep_directions(hp.n)?;
    let mut rows = Vec::with_capacity(radii.len() * dirs.len());
    for &radius in radii {
        for (i, d) in dirs.iter().enumerate() {
            let z = d.scale(radius);
            rows.push(SweepRow { radius, direction_index: i, result: probe_norms(f, hp, &z, rule)? });
        }
    }
    Ok(rows)
}

/// `radius,direction_index,probe_f,probe_fbar,mo_bqt` with 17 significant digits.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["radius", "direction_index", "probe_f", "probe_fbar", "mo_bqt"])?;
    for r in rows {
        w.write_record([
            format!("{:.16e}", r.radius),
            r.direction_index.to_string(),
            format!("{:.16e}", r.result.probe_f),
            format!("{:.16e}", r.result.probe_fbar),
            format!("{:.16e}", r.result.mo_bqt),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `(‖H^β_f g‖_{q,β}, ‖H^s_f g‖_{q,β})` for log-free `fg`.
pub fn projection_comparison_probe(
    f: &Symbol,
    g: &Symbol,
    beta: f64,
    s: f64,
    q: f64,
    rule: &QuadratureRule,
) -> Result<(f64, f64)> {
    if !(s >= beta && beta > -1.0) {
        return Err(Error::Parameter(format!("requires s >= beta > -1 (got s={s}, beta={beta})")));
    }
    let fg = f * g;
    let measure = WeightedMeasure::new(f.dim(), beta)?;
    let norm = |weight: f64| -> Result<f64> {
        let h = &fg - &project_symbol(&fg, weight)?;
        lp_norm(&h, q, &measure, rule)
    };
    Ok((norm(beta)?, norm(s)?))
}
