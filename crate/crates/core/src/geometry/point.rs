use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported complex dimension.
pub const MAX_DIM: usize = 3;

/// Points with `|z| ≥ 1 − BOUNDARY_GUARD` are rejected rather than clamped:
/// past that point `1 − |z|²` has no correct digits left.
pub const BOUNDARY_GUARD: f64 = 1e-14;

/// A point of `C^n`, `n ∈ {1, 2, 3}`, stored inline so it is `Copy`.
///
/// [`Point::new`] only accepts points of the open unit ball `B_n`.
/// Unchecked vectors (boundary directions, tangent vectors) are built with
/// [`Point::vector`].
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    coords: [Complex64; MAX_DIM],
    dim: usize,
}

impl Point {
    /// An interior point of `B_n`.
    pub fn new(coords: &[Complex64]) -> Result<Self> {
        let p = Self::vector(coords)?;
        p.check_interior()?;
        Ok(p)
    }

    /// An interior point from real coordinates (imaginary parts zero).
    pub fn real(coords: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = coords.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(&c)
    }

    /// `r · e_1` in dimension `n`.
    pub fn on_axis(n: usize, r: f64) -> Result<Self> {
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        if n > 0 {
            c[0] = Complex64::new(r, 0.0);
        }
        Self::new(&c)
    }

    /// A vector of `C^n` with no modulus restriction.
    pub fn vector(coords: &[Complex64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::Unsupported(format!(
                "dimension {} (supported: 1..={MAX_DIM})",
                coords.len()
            )));
        }
        let mut c = [Complex64::new(0.0, 0.0); MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Self { coords: c, dim: coords.len() })
    }

    pub fn origin(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "unsupported dimension {n}");
        Self { coords: [Complex64::new(0.0, 0.0); MAX_DIM], dim: n }
    }

    pub(crate) fn from_array(coords: [Complex64; MAX_DIM], dim: usize) -> Self {
        Self { coords, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords[..self.dim]
    }

    pub fn coord(&self, i: usize) -> Complex64 {
        self.coords[i]
    }

    /// `⟨self, other⟩ = Σ self_i · conj(other_i)`.
    pub fn inner(&self, other: &Point) -> Complex64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            acc += self.coords[i] * other.coords[i].conj();
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords().iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `1 − |z|²`.
    pub fn defect(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    pub fn scale(&self, s: f64) -> Point {
        let mut c = self.coords;
        for x in c.iter_mut().take(self.dim) {
            *x *= s;
        }
        Self { coords: c, dim: self.dim }
    }

    pub fn scale_complex(&self, s: Complex64) -> Point {
        let mut c = self.coords;
        for x in c.iter_mut().take(self.dim) {
            *x *= s;
        }
        Self { coords: c, dim: self.dim }
    }

    pub fn add(&self, other: &Point) -> Point {
        let mut c = self.coords;
        for i in 0..self.dim {
            c[i] += other.coords[i];
        }
        Self { coords: c, dim: self.dim }
    }

    pub fn sub(&self, other: &Point) -> Point {
        let mut c = self.coords;
        for i in 0..self.dim {
            c[i] -= other.coords[i];
        }
        Self { coords: c, dim: self.dim }
    }

    pub fn conj(&self) -> Point {
        let mut c = self.coords;
        for x in c.iter_mut() {
            *x = x.conj();
        }
        Self { coords: c, dim: self.dim }
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn distance_euclid(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    pub fn check_interior(&self) -> Result<()> {
        let r2 = self.norm_sqr();
        if !r2.is_finite() || r2.sqrt() >= 1.0 - BOUNDARY_GUARD {
            return Err(Error::Domain(format!(
                "point {self:?} is not in the open unit ball (|z| = {})",
                r2.sqrt()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords()).finish()
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coords().iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        let c: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        Point::vector(&c).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_boundary_and_outside() {
        assert!(Point::real(&[1.0]).is_err());
        assert!(Point::real(&[1.0 - 1e-15]).is_err());
        assert!(Point::real(&[0.6, 0.8]).is_err());
        assert!(Point::real(&[0.999999]).is_ok());
    }

    #[test]
    fn rejects_unsupported_dimension() {
        assert!(matches!(Point::real(&[]), Err(Error::Unsupported(_))));
        assert!(matches!(Point::real(&[0.0; 4]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_second_slot() {
        let z = Point::new(&[Complex64::new(0.1, 0.2), Complex64::new(0.0, 0.3)]).unwrap();
        let w = Point::new(&[Complex64::new(0.0, 0.5), Complex64::new(0.2, 0.0)]).unwrap();
        let a = z.inner(&w);
        let b = w.inner(&z);
        assert_eq!(a, b.conj());
        assert!((z.inner(&z).re - z.norm_sqr()).abs() < 1e-16);
    }
}
