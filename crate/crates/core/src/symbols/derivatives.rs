use num_complex::Complex64;
use serde::Serialize;

use super::Symbol;
use crate::error::{Error, Result};
use crate::geometry::{MoebiusMap, Point};

/// Derivative data of a symbol at one point.
#[derive(Clone, Debug, Serialize)]
pub struct GradientReport {
    pub z: Point,
    /// `∂f/∂z_i`.
    pub grad: Vec<Complex64>,
    /// `Rf(z) = Σ z_i ∂f/∂z_i`.
    pub radial: Complex64,
    /// `|∇(f∘φ_z)(0)|`; present for holomorphic symbols.
    pub invariant_norm: Option<f64>,
    /// Present for holomorphic symbols when `n > 1` and `z ≠ 0`.
    pub tangential_norm: Option<f64>,
}

fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn gradient(f: &Symbol, z: &Point) -> Result<GradientReport> {
    let grad = f.gradient(z)?;
    let radial = grad.iter().zip(z.coords()).map(|(g, c)| g * c).sum();
    let (invariant_norm, tangential_norm) = if f.is_holomorphic() {
        let inv = invariant_from_grad(&grad, z);
        let tan = (z.dim() > 1 && !z.is_zero()).then(|| tangential_from_grad(&grad, z));
        (Some(inv), tan)
    } else {
        (None, None)
    };
    Ok(GradientReport { z: *z, grad, radial, invariant_norm, tangential_norm })
}

fn invariant_from_grad(grad: &[Complex64], z: &Point) -> f64 {
    let n = z.dim();
    let jac = MoebiusMap::new(*z).expect("interior point").jacobian_at_origin();
    let chained: Vec<Complex64> =
        (0..n).map(|c| (0..n).map(|r| grad[r] * jac[r][c]).sum()).collect();
    vector_norm(&chained)
}

fn tangential_from_grad(grad: &[Complex64], z: &Point) -> f64 {
    // ∂f/∂u = ⟨u, ḡ⟩, so the sup over unit u ⟂ z is the norm of ḡ
    // projected onto the complement of span{z}.
    let gbar: Vec<Complex64> = grad.iter().map(|g| g.conj()).collect();
    let along: Complex64 =
        gbar.iter().zip(z.coords()).map(|(g, c)| g * c.conj()).sum::<Complex64>() / z.norm_sqr();
    let proj: Vec<Complex64> = gbar.iter().zip(z.coords()).map(|(g, c)| g - along * c).collect();
    vector_norm(&proj)
}

/// `|∇̃f(z)| = |∇(f∘φ_z)(0)|` for holomorphic `f`, by the chain rule with
/// the analytic Jacobian of `φ_z` at the origin.
pub fn invariant_gradient_norm(f: &Symbol, z: &Point) -> Result<f64> {
    if !f.is_holomorphic() {
        return Err(Error::Parameter("invariant gradient needs a holomorphic symbol".into()));
    }
    z.check_interior()?;
    Ok(invariant_from_grad(&f.gradient(z)?, z))
}

/// `|∇_t f(z)| = sup{|∂f/∂u(z)| : |u| = 1, u ⟂ z}` in closed form.
pub fn tangential_gradient_norm(f: &Symbol, z: &Point) -> Result<f64> {
    if !f.is_holomorphic() {
        return Err(Error::Parameter("tangential gradient needs a holomorphic symbol".into()));
    }
    if z.dim() < 2 {
        return Err(Error::Parameter("tangential gradient needs n > 1".into()));
    }
    if z.is_zero() {
        return Err(Error::Domain("tangential gradient is undefined at the origin".into()));
    }
    Ok(tangential_from_grad(&f.gradient(z)?, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{mobius_apply, sampling::uniform_ball};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_gradient_and_radial() {
        let f = Symbol::named("z1z2", 2).unwrap();
        let z = Point::new(&[c(0.3, 0.1), c(-0.2, 0.4)]).unwrap();
        let r = gradient(&f, &z).unwrap();
        assert!((r.grad[0] - z.coord(1)).norm() < 1e-15);
        assert!((r.grad[1] - z.coord(0)).norm() < 1e-15);
        assert!((r.radial - 2.0 * z.coord(0) * z.coord(1)).norm() < 1e-15);
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let f = Symbol::real_constant(2, 3.0);
        let z = Point::new(&[c(0.3, 0.1), c(-0.2, 0.4)]).unwrap();
        let r = gradient(&f, &z).unwrap();
        assert!(r.grad.iter().all(|g| g.norm() == 0.0));
        assert_eq!(r.invariant_norm, Some(0.0));
        assert_eq!(r.tangential_norm, Some(0.0));
    }

    #[test]
    fn one_dimensional_invariant_identity() {
        let f = Symbol::named("log_pole", 1).unwrap();
        for z in uniform_ball(1, 0.95, 100, 5) {
            let inv = invariant_gradient_norm(&f, &z).unwrap();
            let fp = f.gradient(&z).unwrap()[0];
            assert!((inv - z.defect() * fp.norm()).abs() < 1e-10 * (1.0 + inv));
        }
    }

    #[test]
    fn invariant_gradient_matches_differences_through_mobius() {
        let f = Symbol::named("z1", 2).unwrap();
        let h = 1e-6;
        for z in uniform_ball(2, 0.9, 20, 8) {
            let inv = invariant_gradient_norm(&f, &z).unwrap();
            // holomorphic in u: ∂/∂u_j = ∂/∂x_j along the real axis
            let mut sq = 0.0;
            for j in 0..2 {
                let mut e = [c(0.0, 0.0); 2];
                e[j] = c(h, 0.0);
                let plus = mobius_apply(&z, &Point::vector(&e).unwrap()).unwrap();
                e[j] = c(-h, 0.0);
                let minus = mobius_apply(&z, &Point::vector(&e).unwrap()).unwrap();
                let d = (f.eval(&plus).unwrap() - f.eval(&minus).unwrap()) / (2.0 * h);
                sq += d.norm_sqr();
            }
            assert!((inv - sq.sqrt()).abs() < 1e-6, "{inv} vs {}", sq.sqrt());
        }
    }

    #[test]
    fn tangential_examples() {
        let f = Symbol::named("z1z2", 2).unwrap();
        let t = std::f64::consts::FRAC_PI_4;
        let z = Point::real(&[0.9 * t.sin(), 0.9 * t.cos()]).unwrap();
        assert!(tangential_gradient_norm(&f, &z).unwrap() < 1e-15);
        let z = Point::real(&[0.0, 0.9]).unwrap();
        assert!((tangential_gradient_norm(&f, &z).unwrap() - 0.9).abs() < 1e-15);
        assert!(tangential_gradient_norm(&f, &Point::origin(2)).is_err());
        assert!(tangential_gradient_norm(&Symbol::named("z", 1).unwrap(), &Point::real(&[0.5]).unwrap()).is_err());
    }

    #[test]
    fn tangential_never_exceeds_full_gradient() {
        let f = &Symbol::named("z1z2", 2).unwrap() + &Symbol::named("z_sq", 2).unwrap();
        for z in uniform_ball(2, 0.95, 50, 2) {
            let r = gradient(&f, &z).unwrap();
            let full: f64 = r.grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
            assert!(r.tangential_norm.unwrap() <= full + 1e-14);
        }
    }
}
