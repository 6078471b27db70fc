use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Point, MAX_DIM};
use crate::numeric::{ball_moment, kernel_coefficient, weight_constant};
use crate::symbols::{multi_indices, Symbol};

/// Multi-indices visited before giving up on convergence.
const BUDGET: usize = 400_000;
const QUIET_BLOCKS: usize = 8;

/// `P_ω(f · (1−⟨·,z⟩)^{−λ})(w)` for a log-free symbol, summed over the Taylor
/// coefficients of the kernel factor; each coefficient is projected exactly
/// through the monomial moments.
pub fn project_kernel_product(f: &Symbol, omega: f64, z: &Point, lambda: f64, w: &Point) -> Result<Complex64> {
    if !f.is_moment_class() {
        return Err(Error::Unsupported("kernel-product series needs a log-free symbol".into()));
    }
    let n = f.dim();
    if z.dim() != n || w.dim() != n {
        return Err(Error::Parameter("dimension mismatch".into()));
    }
    if !(omega > -1.0) {
        return Err(Error::Parameter("projection weight must exceed -1".into()));
    }
    let mu = n as f64 + 1.0 + omega;
    let c = weight_constant(n, omega);
    let zc: Vec<Complex64> = (0..n).map(|i| z.coord(i).conj()).collect();
    let wc: Vec<Complex64> = (0..n).map(|i| w.coord(i)).collect();
    let pow = |v: &[Complex64], e: &[u32; MAX_DIM]| -> Complex64 {
        (0..n).fold(Complex64::new(1.0, 0.0), |acc, i| acc * v[i].powu(e[i]))
    };

    let mut total = Complex64::new(0.0, 0.0);
    let (mut visited, mut quiet) = (0usize, 0usize);
    for k in 0u32.. {
        let mut block = Complex64::new(0.0, 0.0);
        let indices = multi_indices(n, k);
        visited += indices.len();
        for l in &indices {
            let zl = pow(&zc, l) * kernel_coefficient(lambda, &l[..n]);
            for t in f.terms() {
                let mut m = [0; MAX_DIM];
                let mut j = [0; MAX_DIM];
                let mut ok = true;
                for i in 0..MAX_DIM {
                    m[i] = t.holo[i] + l[i];
                    match m[i].checked_sub(t.anti[i]) {
                        Some(v) => j[i] = v,
                        None => ok = false,
                    }
                }
                if ok {
                    block += t.coef
                        * zl
                        * c
                        * kernel_coefficient(mu, &j[..n])
                        * ball_moment(n, &m[..n], omega + t.radial_power)
                        * pow(&wc, &j);
                }
            }
        }
        total += block;
        if block.norm() <= 1e-17 * total.norm().max(1e-300) {
            quiet += 1;
            if quiet >= QUIET_BLOCKS {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        if visited > BUDGET {
            break;
        }
    }
    Err(Error::Evaluation(format!(
        "kernel-product series did not settle within {BUDGET} coefficients"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducing_weight_returns_kernel() {
        // P_ω(ḡ K^{n+1+ω}_z) = conj(g(z)) K^{n+1+ω}_z
        let z = Point::new(&[Complex64::new(0.6, -0.3)]).unwrap();
        let g = &Symbol::named("z_sq", 1).unwrap() + &Symbol::real_constant(1, 0.5);
        let gbar = g.conj();
        for omega in [0.0, 1.0, 2.5] {
            let lambda = 2.0 + omega;
            for w in [Point::origin(1), Point::new(&[Complex64::new(-0.2, 0.95)]).unwrap()] {
                let got = project_kernel_product(&gbar, omega, &z, lambda, &w).unwrap();
                let want = g.eval(&z).unwrap().conj() * (Complex64::new(1.0, 0.0) - w.inner(&z)).powf(-lambda);
                assert!((got - want).norm() < 1e-12 * want.norm(), "{got} {want}");
            }
        }
    }

    #[test]
    fn two_dimensional_constant() {
        let z = Point::real(&[0.3, 0.2]).unwrap();
        let w = Point::real(&[0.1, -0.4]).unwrap();
        let got = project_kernel_product(&Symbol::real_constant(2, 1.0), 1.0, &z, 4.0, &w).unwrap();
        let want = (1.0 - w.inner(&z)).powf(-4.0);
        assert!((got - want).norm() < 1e-13);
    }

    #[test]
    fn refuses_logs() {
        let f = Symbol::named("log_pole", 1).unwrap();
        assert!(project_kernel_product(&f, 0.0, &Point::origin(1), 2.0, &Point::origin(1)).is_err());
    }
}
