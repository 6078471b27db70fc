use num_complex::Complex64;

use super::point::{Point, MAX_DIM};
use crate::error::{Error, Result};

/// The involutive automorphism `φ_a` of `B_n` exchanging `0` and `a`:
///
/// ```text
/// φ_a(z) = (a − P_a z − s_a Q_a z) / (1 − ⟨z, a⟩),   s_a = √(1 − |a|²)
/// ```
///
/// `P_a` is the orthogonal projection onto `span{a}` and `Q_a = I − P_a`;
/// both are applied through `a` itself and never materialized.
#[derive(Clone, Copy, Debug)]
pub struct MoebiusMap {
    a: Point,
    a_norm_sqr: f64,
    defect: f64,
    s: f64,
}

impl MoebiusMap {
    pub fn new(a: Point) -> Result<Self> {
        a.check_interior()?;
        Ok(Self::new_unchecked(a))
    }

    pub(crate) fn new_unchecked(a: Point) -> Self {
        let a_norm_sqr = a.norm_sqr();
        let defect = 1.0 - a_norm_sqr;
        Self { a, a_norm_sqr, defect, s: defect.sqrt() }
    }

    pub fn base(&self) -> &Point {
        &self.a
    }

    /// `s_a = √(1 − |a|²)`.
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn apply(&self, z: &Point) -> Result<Point> {
        if z.dim() != self.a.dim() {
            return Err(Error::Parameter(format!(
                "dimension mismatch: {} vs {}",
                z.dim(),
                self.a.dim()
            )));
        }
        z.check_interior()?;
        Ok(self.apply_unchecked(z))
    }

    pub(crate) fn apply_unchecked(&self, z: &Point) -> Point {
        let n = z.dim();
        if self.a_norm_sqr == 0.0 {
            return z.scale(-1.0);
        }
        let za = z.inner(&self.a);
        let denom = Complex64::new(1.0, 0.0) - za;
        let proj = za / self.a_norm_sqr;
        let mut out = [Complex64::new(0.0, 0.0); MAX_DIM];
        for i in 0..n {
            let p = proj * self.a.coord(i);
            let q = z.coord(i) - p;
            out[i] = (self.a.coord(i) - p - q * self.s) / denom;
        }
        Point::from_array(out, n)
    }

    /// `(1 − |a|²)(1 − |z|²) / |1 − ⟨z, a⟩|²`, which equals `1 − |φ_a(z)|²`
    /// but keeps full relative precision near the boundary.
    pub fn image_defect(&self, z: &Point) -> f64 {
        let d = (Complex64::new(1.0, 0.0) - z.inner(&self.a)).norm_sqr();
        self.defect * z.defect() / d
    }

    /// Real Jacobian determinant of `φ_a` at `u` with respect to volume:
    /// `((1 − |a|²) / |1 − ⟨u, a⟩|²)^{n+1}`.
    pub fn volume_jacobian(&self, u: &Point) -> f64 {
        let d = (Complex64::new(1.0, 0.0) - u.inner(&self.a)).norm_sqr();
        (self.defect / d).powi(u.dim() as i32 + 1)
    }

    /// Complex Jacobian `φ_a'(0) = −(1−|a|²) P_a − s_a Q_a`, row-major `n×n`.
    pub fn jacobian_at_origin(&self) -> [[Complex64; MAX_DIM]; MAX_DIM] {
        let n = self.a.dim();
        let mut j = [[Complex64::new(0.0, 0.0); MAX_DIM]; MAX_DIM];
        for (r, row) in j.iter_mut().enumerate().take(n) {
            for (c, entry) in row.iter_mut().enumerate().take(n) {
                let p = if self.a_norm_sqr == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.a.coord(r) * self.a.coord(c).conj() / self.a_norm_sqr
                };
                let q = if r == c { Complex64::new(1.0, 0.0) - p } else { -p };
                *entry = -(p * self.defect + q * self.s);
            }
        }
        j
    }
}

/// `φ_a(z)`.
pub fn mobius_apply(a: &Point, z: &Point) -> Result<Point> {
    MoebiusMap::new(*a)?.apply(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn origin_base_is_negation() {
        let z = Point::new(&[c(0.3, -0.2), c(0.1, 0.4)]).unwrap();
        let w = mobius_apply(&Point::origin(2), &z).unwrap();
        assert_eq!(w, z.scale(-1.0));
    }

    #[test]
    fn interchanges_zero_and_base() {
        let a = Point::real(&[0.5]).unwrap();
        let at_a = mobius_apply(&a, &a).unwrap();
        assert!(at_a.norm() < 1e-16);
        let at_0 = mobius_apply(&a, &Point::origin(1)).unwrap();
        assert_eq!(at_0, a);
    }

    #[test]
    fn rejects_points_outside_ball() {
        let a = Point::real(&[0.5]).unwrap();
        let out = Point::vector(&[c(1.0, 0.0)]).unwrap();
        assert!(matches!(mobius_apply(&a, &out), Err(Error::Domain(_))));
        assert!(matches!(mobius_apply(&out, &a), Err(Error::Domain(_))));
    }

    #[test]
    fn defect_identity_in_dimension_two() {
        let a = Point::new(&[c(0.3, 0.4), c(-0.2, 0.1)]).unwrap();
        let z = Point::new(&[c(-0.5, 0.1), c(0.2, 0.6)]).unwrap();
        let m = MoebiusMap::new(a).unwrap();
        let w = m.apply(&z).unwrap();
        assert!((w.defect() - m.image_defect(&z)).abs() < 1e-14);
        let back = m.apply(&w).unwrap();
        assert!(back.distance_euclid(&z) < 1e-14);
    }
}
