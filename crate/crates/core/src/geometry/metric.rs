use num_complex::Complex64;

use super::mobius::MoebiusMap;
use super::point::Point;
use crate::error::{Error, Result};

/// `|φ_z(w)|²` and `1 − |φ_z(w)|²`, both computed without cancellation.
///
/// The first uses `|1−⟨z,w⟩|² − (1−|z|²)(1−|w|²) = |z−w|² − Σ_{i<j}|z_i w_j − z_j w_i|²`,
/// the second the defect identity of `φ_z`. Every operation is symmetric in
/// `(z, w)` bit for bit, so the distance is exactly symmetric.
pub(crate) fn pseudo_hyperbolic_parts(z: &Point, w: &Point) -> (f64, f64) {
    let one = Complex64::new(1.0, 0.0);
    let d = (one - z.inner(w)).norm_sqr();
    let mut lagrange = 0.0;
    let n = z.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            lagrange += (z.coord(i) * w.coord(j) - z.coord(j) * w.coord(i)).norm_sqr();
        }
    }
    let num = (z.sub(w).norm_sqr() - lagrange).max(0.0);
    (num / d, z.defect() * w.defect() / d)
}

pub(crate) fn distance_unchecked(z: &Point, w: &Point) -> f64 {
    let (rho_sq, defect) = pseudo_hyperbolic_parts(z, w);
    let rho = rho_sq.sqrt();
    if rho < 0.5 {
        rho.atanh()
    } else {
        0.5 * ((1.0 + rho).powi(2) / defect).ln()
    }
}

/// Bergman-metric distance `β(z,w) = ½ log((1+|φ_z(w)|)/(1−|φ_z(w)|))`.
pub fn bergman_distance(z: &Point, w: &Point) -> Result<f64> {
    if z.dim() != w.dim() {
        return Err(Error::Parameter("dimension mismatch".into()));
    }
    z.check_interior()?;
    w.check_interior()?;
    Ok(distance_unchecked(z, w))
}

/// `β(0, z) = artanh |z|`.
pub fn distance_from_origin(z: &Point) -> f64 {
    z.norm().atanh()
}

/// The Bergman geodesic from `z` to `w`, parametrized proportionally to
/// arc length on `[0, 1]`.
///
/// Built by conjugating with `φ_z`: the geodesic from `0` to `φ_z(w)` is the
/// radial segment, and moving a hyperbolic fraction `t` along it lands at
/// `tanh(t·β(z,w)) · φ_z(w)/|φ_z(w)|`.
#[derive(Clone, Debug)]
pub struct Geodesic {
    start: Point,
    end: Point,
    length: f64,
    map: MoebiusMap,
    direction: Point,
}

impl Geodesic {
    pub fn new(start: Point, end: Point) -> Result<Self> {
        let length = bergman_distance(&start, &end)?;
        let map = MoebiusMap::new_unchecked(start);
        let image = map.apply_unchecked(&end);
        let r = image.norm();
        let direction = if r > 0.0 { image.scale(1.0 / r) } else { image };
        Ok(Self { start, end, length, map, direction })
    }

    pub fn start(&self) -> &Point {
        &self.start
    }

    pub fn end(&self) -> &Point {
        &self.end
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn point(&self, t: f64) -> Result<Point> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("geodesic parameter {t} outside [0, 1]")));
        }
        if t == 0.0 || self.length == 0.0 {
            return Ok(self.start);
        }
        let radial = self.direction.scale((t * self.length).tanh());
        Ok(self.map.apply_unchecked(&radial))
    }
}

/// Point at Bergman distance `t·β(z,w)` from `z` on the geodesic to `w`.
pub fn geodesic_point(z: &Point, w: &Point, t: f64) -> Result<Point> {
    Geodesic::new(*z, *w)?.point(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_is_zero_on_diagonal() {
        let z = Point::real(&[0.3, -0.4]).unwrap();
        assert_eq!(bergman_distance(&z, &z).unwrap(), 0.0);
    }

    #[test]
    fn distance_from_origin_to_half() {
        let d = bergman_distance(&Point::origin(1), &Point::real(&[0.5]).unwrap()).unwrap();
        assert!((d - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!((d - 0.549306).abs() < 1e-6);
    }

    #[test]
    fn rejects_boundary_points() {
        let z = Point::origin(1);
        let w = Point::vector(&[Complex64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(bergman_distance(&z, &w), Err(Error::Domain(_))));
    }

    #[test]
    fn radial_geodesic_midpoint() {
        let p = geodesic_point(&Point::origin(1), &Point::real(&[0.8]).unwrap(), 0.5).unwrap();
        assert!((p.coord(0).re - 0.5).abs() < 1e-15);
        assert!(p.coord(0).im.abs() < 1e-15);
    }

    #[test]
    fn geodesic_endpoints() {
        let z = Point::real(&[0.2, -0.5]).unwrap();
        let w = Point::new(&[Complex64::new(0.1, 0.7), Complex64::new(0.0, -0.1)]).unwrap();
        let g = Geodesic::new(z, w).unwrap();
        assert_eq!(g.point(0.0).unwrap(), z);
        assert!(g.point(1.0).unwrap().distance_euclid(&w) < 1e-14);
        assert!(g.point(1.5).is_err());
        assert!(g.point(-0.1).is_err());
    }

    #[test]
    fn geodesic_between_equal_points_is_constant() {
        let z = Point::real(&[0.2]).unwrap();
        assert_eq!(geodesic_point(&z, &z, 0.7).unwrap(), z);
    }
}
