use num_complex::Complex64;

use rayon::prelude::*;

use super::kernel::{kernel_power, KernelParams};
use crate::error::{Error, Result};
use crate::function::BallFunction;
use crate::geometry::{Point, MAX_DIM};
use crate::numeric::{ball_moment, kernel_coefficient, pairwise_sum_complex, weight_constant};
use crate::quadrature::{integrate, QuadratureRule};
use crate::symbols::{Symbol, Term};

/// Exact `P_α` of a symbol without log factors, as a holomorphic polynomial.
///
/// `P_α(w^M w̄^K (1−|w|²)^s)(z) = (λ)_{|L|}/L! · c_α ∫|w^M|²(1−|w|²)^{α+s} dv · z^L`
/// with `L = M − K` when `M ≥ K`, and zero otherwise.
pub fn project_symbol(f: &Symbol, alpha: f64) -> Result<Symbol> {
    if !f.is_moment_class() {
        return Err(Error::Unsupported("exact projection needs a symbol without log factors".into()));
    }
    let n = f.dim();
    let kp = KernelParams::new(n, alpha)?;
    let c = weight_constant(n, alpha);
    let mut terms = Vec::new();
    for t in f.terms() {
        if !(alpha + t.radial_power > -1.0) {
            return Err(Error::Evaluation(format!(
                "(1-|w|^2)^{} is not integrable against dv_{alpha}",
                t.radial_power
            )));
        }
        if let Some(l) = lowered(t) {
            let coef = t.coef
                * kernel_coefficient(kp.exponent(), &l[..n])
                * c
                * ball_moment(n, &t.holo[..n], alpha + t.radial_power);
            terms.push(Term::monomial(coef, &l[..n], &[]));
        }
    }
    Ok(Symbol::new(n, terms)?.simplified())
}

fn lowered(t: &Term) -> Option<[u32; MAX_DIM]> {
    let mut l = [0; MAX_DIM];
    for i in 0..MAX_DIM {
        l[i] = t.holo[i].checked_sub(t.anti[i])?;
    }
    Some(l)
}

/// `P_α F(z) = c_α ∫ F(w) (1−|w|²)^α (1−⟨z,w⟩)^{−(n+1+α)} dv(w)` on the plain rule.
///
/// The kernel's Taylor tail in `⟨w,z⟩` decays like `|z|^k`; an angular product
/// rule with `M` angles integrates every frequency below `M` exactly, so the
/// error is of order `|z|^M`. Pushing the nodes through `φ_z` does not help
/// here: the kernel is Möbius-covariant and reappears unchanged.
pub fn project_quadrature<F: BallFunction + ?Sized>(
    kp: &KernelParams,
    f: &F,
    z: &Point,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    if rule.dim() != z.dim() || kp.n != z.dim() {
        return Err(Error::Parameter("dimension mismatch".into()));
    }
    z.check_interior()?;
    let c = weight_constant(kp.n, kp.alpha);
    let x = kp.exponent();
    integrate(rule, |w| Ok(f.eval(w)? * w.defect().powf(kp.alpha) * kernel_power(w, z, x))).map(|v| v * c)
}

/// [`project_quadrature`] at many points, evaluating `F` once per node.
pub fn project_quadrature_batch<F: BallFunction + ?Sized>(
    kp: &KernelParams,
    f: &F,
    points: &[Point],
    rule: &QuadratureRule,
) -> Result<Vec<Complex64>> {
    if rule.dim() != kp.n || points.iter().any(|z| z.dim() != kp.n) {
        return Err(Error::Parameter("dimension mismatch".into()));
    }
    let c = weight_constant(kp.n, kp.alpha);
    let table: Vec<Complex64> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights())
        .map(|(w, &wt)| Ok(f.eval(w)? * (wt * c * w.defect().powf(kp.alpha))))
        .collect::<Result<_>>()?;
    let x = kp.exponent();
    points
        .par_iter()
        .map(|z| {
            z.check_interior()?;
            let terms: Vec<Complex64> =
                rule.nodes().iter().zip(&table).map(|(w, g)| g * kernel_power(w, z, x)).collect();
            Ok(pairwise_sum_complex(&terms))
        })
        .collect()
}

/// `P_α f(z)`: exact for log-free symbols, exact for pluriharmonic
/// symbols (`P(A + B̄) = A + conj(B(0))`), quadrature otherwise.
pub fn project(kp: &KernelParams, f: &Symbol, z: &Point, rule: &QuadratureRule) -> Result<Complex64> {
    if f.dim() != kp.n {
        return Err(Error::Parameter("symbol and kernel dimensions differ".into()));
    }
    z.check_interior()?;
    if f.is_moment_class() {
        return project_symbol(f, kp.alpha)?.eval(z);
    }
    if let Some((a, b)) = f.pluriharmonic_split() {
        return Ok(a.eval(z)? + b.eval(&Point::origin(kp.n))?.conj());
    }
    project_quadrature(kp, f, z, rule)
}
