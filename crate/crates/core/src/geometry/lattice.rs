use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::metric::{distance_from_origin, distance_unchecked};
use super::point::{Point, BOUNDARY_GUARD};
use super::sampling::{sphere_directions, uniform_ball};
use crate::error::{param, Error, Result};

/// Upper bound on the number of centers of a lattice in dimension `n ≥ 2`,
/// where the greedy construction is quadratic per shell.
const MAX_CENTERS_HIGHER_DIM: usize = 20_000;

/// Slack on reverse-triangle pruning, well above the rounding error of
/// `artanh |z|`.
const PRUNE_SLACK: f64 = 1e-9;

/// An `r`-lattice in the Bergman metric: centers on hyperbolic shells of
/// radius `k·r/2` around the origin, pairwise at Bergman distance `≥ r/2`.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    r: f64,
    max_modulus: f64,
    outer_modulus: f64,
    centers: Vec<Point>,
    shell_index: Vec<usize>,
    radial: Vec<f64>,
    /// `(first center, count)` per shell; shell centers are sorted by angle for `n = 1`.
    shells: Vec<(usize, usize)>,
    angles: Vec<f64>,
    separation: f64,
}

impl Lattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Modulus of the region `{|z| ≤ max_modulus}` the lattice is built to cover.
    pub fn max_modulus(&self) -> f64 {
        self.max_modulus
    }

    /// Euclidean radius of the outermost shell actually used.
    pub fn outer_modulus(&self) -> f64 {
        self.outer_modulus
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn shell_of(&self, k: usize) -> usize {
        self.shell_index[k]
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Certified minimum pairwise Bergman distance.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Centers with `|a| ≤ modulus`, as a new lattice (separation recertified).
    pub fn truncated(&self, modulus: f64) -> Lattice {
        let keep: Vec<usize> = (0..self.len()).filter(|&k| self.centers[k].norm() <= modulus).collect();
        let mut out = Lattice {
            dim: self.dim,
            r: self.r,
            max_modulus: self.max_modulus.min(modulus),
            outer_modulus: keep.iter().map(|&k| self.centers[k].norm()).fold(0.0, f64::max),
            centers: keep.iter().map(|&k| self.centers[k]).collect(),
            shell_index: keep.iter().map(|&k| self.shell_index[k]).collect(),
            radial: keep.iter().map(|&k| self.radial[k]).collect(),
            shells: Vec::new(),
            angles: keep.iter().filter_map(|&k| self.angles.get(k).copied()).collect(),
            separation: f64::INFINITY,
        };
        out.rebuild_shell_table();
        out.separation = certify_separation(&out.centers, &out.radial);
        out
    }

    fn rebuild_shell_table(&mut self) {
        self.shells.clear();
        let max_shell = self.shell_index.iter().copied().max().unwrap_or(0);
        let mut start = 0;
        for s in 0..=max_shell {
            let count = self.shell_index[start..].iter().take_while(|&&k| k == s).count();
            self.shells.push((start, count));
            start += count;
        }
    }

    /// Indices of centers that can lie within Bergman distance `radius` of `z`.
    fn candidates(&self, z: &Point, radius: f64) -> Vec<usize> {
        let rz = distance_from_origin(z);
        let lo = self.radial.partition_point(|&b| b <= rz - radius - PRUNE_SLACK);
        let hi = self.radial.partition_point(|&b| b < rz + radius + PRUNE_SLACK);
        if self.dim != 1 {
            return (lo..hi).collect();
        }
        // n = 1: D(z, R) is the Euclidean disk with center c and radius ρ below;
        // on each shell only an arc of angles can meet it.
        let t = radius.tanh();
        let z0 = z.coord(0);
        let zz = z0.norm_sqr();
        let c = z0 * ((1.0 - t * t) / (1.0 - t * t * zz));
        let rho = t * (1.0 - zz) / (1.0 - t * t * zz) * (1.0 + 1e-9) + 1e-12;
        let (cabs, carg) = (c.norm(), c.arg());
        let mut out = Vec::new();
        let first_shell = if lo < self.len() { self.shell_index[lo] } else { return out };
        let last_shell = if hi > 0 { self.shell_index[hi - 1] } else { return out };
        for s in first_shell..=last_shell {
            let (start, count) = self.shells[s];
            if count == 0 {
                continue;
            }
            let rs = self.centers[start].norm();
            if cabs < 1e-300 || rs < 1e-300 {
                out.extend(start..start + count);
                continue;
            }
            let cos_half = (rs * rs + cabs * cabs - rho * rho) / (2.0 * rs * cabs);
            if cos_half <= -1.0 {
                out.extend(start..start + count);
                continue;
            }
            if cos_half > 1.0 {
                continue;
            }
            let half = cos_half.acos() + 1e-9;
            let angles = &self.angles[start..start + count];
            let mut push_range = |a: f64, b: f64| {
                let i = angles.partition_point(|&x| x < a);
                let j = angles.partition_point(|&x| x <= b);
                out.extend((start + i)..(start + j));
            };
            let (a, b) = (carg - half, carg + half);
            // angles live in [0, 2π)
            let (a, b) = (a.rem_euclid(2.0 * PI), a.rem_euclid(2.0 * PI) + (b - a));
            if b < 2.0 * PI {
                push_range(a, b);
            } else {
                push_range(a, 2.0 * PI);
                push_range(0.0, b - 2.0 * PI);
            }
        }
        out
    }

    /// Number of centers `a_k` with `β(z, a_k) < radius`.
    pub fn count_within(&self, z: &Point, radius: f64) -> usize {
        self.candidates(z, radius)
            .into_iter()
            .filter(|&k| distance_unchecked(z, &self.centers[k]) < radius)
            .count()
    }

    /// `min_k β(z, a_k)` if it is below `cutoff`, otherwise `None`.
    pub fn nearest_within(&self, z: &Point, cutoff: f64) -> Option<f64> {
        self.candidates(z, cutoff)
            .into_iter()
            .map(|k| distance_unchecked(z, &self.centers[k]))
            .filter(|&d| d < cutoff)
            .min_by(f64::total_cmp)
    }

    /// CSV export: `index, z1_re, z1_im, …, shell_index` with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["index".to_string()];
        for i in 1..=self.dim {
            header.push(format!("z{i}_re"));
            header.push(format!("z{i}_im"));
        }
        header.push("shell_index".into());
        w.write_record(&header)?;
        for (k, p) in self.centers.iter().enumerate() {
            let mut row = vec![k.to_string()];
            for c in p.coords() {
                row.push(format!("{:.16e}", c.re));
                row.push(format!("{:.16e}", c.im));
            }
            row.push(self.shell_index[k].to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exact minimum pairwise distance. Centers must be sorted by `radial`
/// (`β(0, a)`); pairs whose radial gap already exceeds the running minimum are
/// skipped because `β(a, b) ≥ |β(0, a) − β(0, b)|`.
fn certify_separation(centers: &[Point], radial: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            if radial[j] - radial[i] > best + PRUNE_SLACK {
                break;
            }
            let d = distance_unchecked(&centers[i], &centers[j]);
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// Largest angle count `M` such that consecutive points of `{ρ e^{2πij/M}}`
/// are at Bergman distance `≥ target`.
fn angular_count(rho: f64, target: f64) -> usize {
    let dist = |theta: f64| {
        let a = Point::from_array([Complex64::new(rho, 0.0), Complex64::default(), Complex64::default()], 1);
        let b = Point::from_array([Complex64::from_polar(rho, theta), Complex64::default(), Complex64::default()], 1);
        distance_unchecked(&a, &b)
    };
    if dist(PI) < target {
        return 1;
    }
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut m = ((2.0 * PI) / hi).floor() as usize;
    while m > 1 && dist(2.0 * PI / m as f64) < target {
        m -= 1;
    }
    m.max(1)
}

/// Greedy hyperbolic shell packing.
///
/// Shell `k` sits at Euclidean radius `tanh(k·r/2)`; shells are added until
/// they pass `β(0, max_modulus) + r/2`. Candidates on each shell are spaced
/// about `r/2` apart in `β` and accepted only if they keep distance `≥ r/2`
/// from every accepted center (only the current and previous shells can
/// violate this). The resulting separation is then certified exactly.
pub fn build_lattice(n: usize, r: f64, max_modulus: f64) -> Result<Lattice> {
    if !(1..=3).contains(&n) {
        return Err(Error::Unsupported(format!("dimension {n}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return param(format!("lattice radius must satisfy 0 < r < 1, got {r}"));
    }
    if !(max_modulus > 0.0 && max_modulus < 1.0 - BOUNDARY_GUARD) {
        return param(format!("max_modulus must satisfy 0 < max_modulus < 1, got {max_modulus}"));
    }
    let half = 0.5 * r;
    let beta_max = max_modulus.atanh() + half;
    let mut centers = vec![Point::origin(n)];
    let mut shell_index = vec![0usize];
    let mut angles = vec![0.0];
    let mut prev_shell: (usize, usize) = (0, 1);
    let mut k = 1usize;
    loop {
        let beta = k as f64 * half;
        let rho = beta.tanh();
        if rho >= 1.0 - 1e-12 {
            return param("lattice shells reach the numerical boundary; lower max_modulus");
        }
        let start = centers.len();
        let mut shell_angles = Vec::new();
        let candidates: Vec<Point> = if n == 1 {
            let m = angular_count(rho, half * (1.0 + 1e-12));
            let offset = if k % 2 == 1 { PI / m as f64 } else { 0.0 };
            (0..m)
                .map(|j| {
                    let theta = (offset + 2.0 * PI * j as f64 / m as f64).rem_euclid(2.0 * PI);
                    Point::from_array(
                        [Complex64::from_polar(rho, theta), Complex64::default(), Complex64::default()],
                        1,
                    )
                })
                .collect()
        } else {
            let nf = n as f64;
            let sphere_area = 2.0 * PI.powi(n as i32) / (1..n).map(|i| i as f64).product::<f64>();
            let hyp_area = sphere_area * rho.powi(2 * n as i32 - 1) / (1.0 - rho * rho).powf(nf);
            let est = hyp_area / half.powi(2 * n as i32 - 1);
            let count = (6.0 * est).ceil() as usize + 8;
            if centers.len() + count / 6 > MAX_CENTERS_HIGHER_DIM {
                return Err(Error::Unsupported(format!(
                    "lattice in dimension {n} with r = {r} up to |z| = {max_modulus} exceeds {MAX_CENTERS_HIGHER_DIM} centers"
                )));
            }
            sphere_directions(n, count, 0x1a77_1ce0 ^ k as u64)
                .into_iter()
                .map(|d| d.scale(rho))
                .collect()
        };
        for cand in candidates {
            let clash = (prev_shell.0..centers.len())
                .any(|j| distance_unchecked(&cand, &centers[j]) < half);
            if !clash {
                if n == 1 {
                    shell_angles.push(cand.coord(0).arg().rem_euclid(2.0 * PI));
                }
                centers.push(cand);
                shell_index.push(k);
            }
        }
        if n == 1 {
            // keep each shell sorted by angle for the windowed searches
            let mut order: Vec<usize> = (0..shell_angles.len()).collect();
            order.sort_by(|&a, &b| shell_angles[a].total_cmp(&shell_angles[b]));
            let shell_pts: Vec<Point> = order.iter().map(|&i| centers[start + i]).collect();
            centers.truncate(start);
            centers.extend(shell_pts);
            angles.extend(order.iter().map(|&i| shell_angles[i]));
        }
        prev_shell = (start, centers.len() - start);
        if beta >= beta_max {
            break;
        }
        k += 1;
    }
    let radial: Vec<f64> = centers.iter().map(distance_from_origin).collect();
    let outer_modulus = centers.iter().map(Point::norm).fold(0.0, f64::max);
    let mut lattice = Lattice {
        dim: n,
        r,
        max_modulus,
        outer_modulus,
        centers,
        shell_index,
        radial,
        shells: Vec::new(),
        angles,
        separation: f64::INFINITY,
    };
    lattice.rebuild_shell_table();
    lattice.separation = certify_separation(&lattice.centers, &lattice.radial);
    Ok(lattice)
}

/// Result of a sampled covering check of `{|z| ≤ max_modulus}` by the balls `D(a_k, r)`.
#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub samples: usize,
    pub uncovered: usize,
    /// Largest distance from a sample to its nearest center (capped at `r`).
    pub worst_nearest: f64,
}

/// Rejection-sampling certificate of the covering property.
pub fn check_covering(lat: &Lattice, samples: usize, seed: u64) -> Result<CoveringReport> {
    if samples == 0 {
        return param("samples must be at least 1");
    }
    let pts = uniform_ball(lat.dim, lat.max_modulus, samples, seed);
    let nearest: Vec<Option<f64>> = pts.par_iter().map(|z| lat.nearest_within(z, lat.r)).collect();
    let uncovered = nearest.iter().filter(|d| d.is_none()).count();
    let worst_nearest = nearest.iter().map(|d| d.unwrap_or(lat.r)).fold(0.0, f64::max);
    Ok(CoveringReport { samples, uncovered, worst_nearest })
}

/// Maximum, over `samples` seeded uniform points of `{|z| ≤ max_modulus}`, of
/// the number of dilated balls `D(a_k, radius_factor · r)` containing the point.
pub fn covering_multiplicity(lat: &Lattice, radius_factor: f64, samples: usize, seed: u64) -> Result<usize> {
    if samples == 0 {
        return param("samples must be at least 1");
    }
    if !(radius_factor > 0.0) {
        return param(format!("radius_factor must be positive, got {radius_factor}"));
    }
    let radius = radius_factor * lat.r;
    let pts = uniform_ball(lat.dim, lat.max_modulus, samples, seed);
    let counts: Vec<usize> = pts.par_iter().map(|z| lat.count_within(z, radius)).collect();
    Ok(counts.into_iter().max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_lattice(1, 1.0, 0.9).is_err());
        assert!(build_lattice(1, 0.0, 0.9).is_err());
        assert!(build_lattice(1, 0.5, 1.0).is_err());
        assert!(build_lattice(4, 0.5, 0.9).is_err());
    }

    #[test]
    fn small_lattice_is_separated_and_covers() {
        let lat = build_lattice(1, 0.5, 0.9).unwrap();
        assert!(lat.separation() >= 0.25);
        // brute-force separation
        let c = lat.centers();
        let mut min = f64::INFINITY;
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                min = min.min(distance_unchecked(&c[i], &c[j]));
            }
        }
        assert_eq!(min, lat.separation());
        let cov = check_covering(&lat, 2000, 1).unwrap();
        assert_eq!(cov.uncovered, 0);
    }

    #[test]
    fn windowed_counts_match_brute_force() {
        let lat = build_lattice(1, 0.5, 0.95).unwrap();
        for z in uniform_ball(1, 0.95, 200, 3) {
            for radius in [0.125, 0.5, 2.0] {
                let brute = lat
                    .centers()
                    .iter()
                    .filter(|a| distance_unchecked(&z, a) < radius)
                    .count();
                assert_eq!(brute, lat.count_within(&z, radius), "z={z:?} R={radius}");
            }
        }
    }

    #[test]
    fn higher_dimensional_lattice_is_separated() {
        let lat = build_lattice(2, 0.6, 0.6).unwrap();
        assert!(lat.separation() >= 0.3);
        assert_eq!(check_covering(&lat, 500, 2).unwrap().uncovered, 0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let lat = build_lattice(1, 0.5, 0.5).unwrap();
        let mut buf = Vec::new();
        lat.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "index,z1_re,z1_im,shell_index");
        assert_eq!(lines.count(), lat.len());
    }
}
