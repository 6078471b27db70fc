use rayon::prelude::*;
use serde::Serialize;

use super::derivatives::{invariant_gradient_norm, tangential_gradient_norm};
use super::Symbol;
use crate::error::{Error, Result};
use crate::geometry::{sampling::shell_points, Lattice, Point};

/// Points per shell used by the shell sweeps below.
pub const SHELL_RESOLUTION: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct BlochEstimate {
    pub a: f64,
    /// `|f(0)| + sup (1−|z|²)^a |∇f(z)|` over the sampled points.
    pub norm: f64,
    /// `(radius, shell sup of (1−|z|²)^a |∇f|)`.
    pub little_profile: Vec<(f64, f64)>,
    /// Same with `(1−|z|²)^{a−1} |∇̃f|`.
    pub invariant_variant: Option<Vec<(f64, f64)>>,
}

fn weighted_gradient(f: &Symbol, z: &Point, a: f64) -> Result<f64> {
    let g = f.gradient(z)?;
    Ok(z.defect().powf(a) * g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
}

fn shell_sup<F>(n: usize, radius: f64, resolution: usize, f: F) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64> + Sync,
{
    let values: Vec<f64> =
        shell_points(n, radius, resolution).par_iter().map(&f).collect::<Result<_>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// Bloch-type norm estimate of a holomorphic symbol from lattice points and shells.
pub fn bloch_norm(f: &Symbol, a: f64, lat: Option<&Lattice>, shells: &[f64]) -> Result<BlochEstimate> {
    if !(a >= 0.0) {
        return Err(Error::Parameter("Bloch exponent must be non-negative".into()));
    }
    if !f.is_holomorphic() {
        return Err(Error::Parameter("Bloch norm needs a holomorphic symbol".into()));
    }
    let n = f.dim();
    let at_origin = f.eval(&Point::origin(n))?.norm();
    let mut sup = weighted_gradient(f, &Point::origin(n), a)?;
    if let Some(lat) = lat {
        let vals: Vec<f64> =
            lat.centers().par_iter().map(|z| weighted_gradient(f, z, a)).collect::<Result<_>>()?;
        sup = vals.into_iter().fold(sup, f64::max);
    }
    let mut little_profile = Vec::with_capacity(shells.len());
    for &r in shells {
        let s = shell_sup(n, r, SHELL_RESOLUTION, |z| weighted_gradient(f, z, a))?;
        sup = sup.max(s);
        little_profile.push((r, s));
    }
    let invariant_variant = if a > 0.5 || n == 1 {
        let mut v = Vec::with_capacity(shells.len());
        for &r in shells {
            let s = shell_sup(n, r, SHELL_RESOLUTION, |z| {
                Ok(z.defect().powf(a - 1.0) * invariant_gradient_norm(f, z)?)
            })?;
            v.push((r, s));
        }
        Some(v)
    } else {
        None
    };
    Ok(BlochEstimate { a, norm: at_origin + sup, little_profile, invariant_variant })
}

/// Shell sups of `|∇_t f|`; a nonconstant holomorphic `f` cannot have a
/// profile tending to zero.
pub fn max_principle_probe(f: &Symbol, shells: &[f64]) -> Result<Vec<(f64, f64)>> {
    if f.dim() < 2 {
        return Err(Error::Parameter("tangential probe needs n > 1".into()));
    }
    shells
        .iter()
        .map(|&r| Ok((r, shell_sup(f.dim(), r, SHELL_RESOLUTION, |z| tangential_gradient_norm(f, z))?)))
        .collect()
}

/// Shell sups of `(1−|z|²)^γ |∇̃f(z)|`.
pub fn invariant_gradient_profile(f: &Symbol, gamma: f64, shells: &[f64]) -> Result<Vec<(f64, f64)>> {
    shells
        .iter()
        .map(|&r| {
            Ok((r, shell_sup(f.dim(), r, SHELL_RESOLUTION, |z| {
                Ok(z.defect().powf(gamma) * invariant_gradient_norm(f, z)?)
            })?))
        })
        .collect()
}
