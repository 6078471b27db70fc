//! Deterministic point sets: seeded uniform samples of balls and spheres,
//! and structured grids on spheres `{|z| = r}` used for shell suprema.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::point::{Point, MAX_DIM};

fn random_direction(n: usize, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let mut c = [Complex64::new(0.0, 0.0); MAX_DIM];
        for x in c.iter_mut().take(n) {
            *x = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let p = Point::from_array(c, n);
        let r = p.norm();
        if r > 1e-8 {
            return p.scale(1.0 / r);
        }
    }
}

/// `count` unit vectors of `C^n`, uniformly distributed, reproducible from `seed`.
pub fn sphere_directions(n: usize, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_direction(n, &mut rng)).collect()
}

/// `count` points uniformly distributed (Lebesgue measure) in `{|z| ≤ radius}`.
pub fn uniform_ball(n: usize, radius: f64, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dir = random_direction(n, &mut rng);
            let u: f64 = rng.random();
            dir.scale(radius * u.powf(1.0 / (2 * n) as f64))
        })
        .collect()
}

/// Deterministic grid on the sphere `{|z| = radius}`.
///
/// * `n = 1`: `resolution` equally spaced angles starting at `θ = 0`.
/// * `n = 2`: `(cos φ e^{iθ₁}, sin φ e^{iθ₂})` with `resolution/4 + 1` values of
///   `φ ∈ [0, π/2]` (endpoints included) and `resolution/2` values of each `θ`.
/// * `n = 3`: `resolution²` seeded random directions.
pub fn shell_points(n: usize, radius: f64, resolution: usize) -> Vec<Point> {
    let res = resolution.max(4);
    match n {
        1 => (0..res)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / res as f64;
                Point::from_array(
                    [Complex64::from_polar(radius, t), Complex64::default(), Complex64::default()],
                    1,
                )
            })
            .collect(),
        2 => {
            let polar = res / 4 + 1;
            let ang = res / 2;
            let mut out = Vec::with_capacity(polar * ang * ang);
            for k in 0..polar {
                let phi = FRAC_PI_2 * k as f64 / (polar - 1) as f64;
                for j1 in 0..ang {
                    for j2 in 0..ang {
                        let t1 = 2.0 * PI * j1 as f64 / ang as f64;
                        let t2 = 2.0 * PI * j2 as f64 / ang as f64;
                        out.push(Point::from_array(
                            [
                                Complex64::from_polar(radius * phi.cos(), t1),
                                Complex64::from_polar(radius * phi.sin(), t2),
                                Complex64::default(),
                            ],
                            2,
                        ));
                    }
                }
            }
            out
        }
        _ => sphere_directions(n, res * res, 0x5eed_5be1)
            .into_iter()
            .map(|d| d.scale(radius))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_samples_are_reproducible() {
        let a = uniform_ball(2, 0.9, 50, 7);
        let b = uniform_ball(2, 0.9, 50, 7);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.norm() <= 0.9));
        assert_ne!(a, uniform_ball(2, 0.9, 50, 8));
    }

    #[test]
    fn shell_points_lie_on_shell() {
        for n in 1..=3 {
            for p in shell_points(n, 0.7, 8) {
                assert!((p.norm() - 0.7).abs() < 1e-14);
            }
        }
        // the real axis is part of the n = 1 grid
        assert_eq!(shell_points(1, 0.5, 16)[0].coord(0), Complex64::new(0.5, 0.0));
    }
}
