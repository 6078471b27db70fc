use bergman_lab::analysis::{berezin, kernel_eval, BerezinParams, KernelParams};
use bergman_lab::geometry::{bergman_distance, geodesic_point, MoebiusMap, Point};
use bergman_lab::quadrature::{build_quadrature, QuadratureRule, RuleSpec};
use bergman_lab::symbols::Symbol;
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

/// A point of the ball with modulus below `max`.
fn point(n: usize, max: f64) -> impl Strategy<Value = Point> {
    (prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n), 0.0..max).prop_filter_map("zero vector", move |(c, r)| {
        let v: Vec<Complex64> = c.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let len = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        (len > 1e-3).then(|| Point::new(&v.iter().map(|x| x * (r / len)).collect::<Vec<_>>()).unwrap())
    })
}

fn pair(max: f64) -> impl Strategy<Value = (Point, Point)> {
    (1usize..=3).prop_flat_map(move |n| (point(n, max), point(n, max)))
}

fn triple(max: f64) -> impl Strategy<Value = (Point, Point, Point)> {
    (1usize..=3).prop_flat_map(move |n| (point(n, max), point(n, max), point(n, max)))
}

fn disk_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| build_quadrature(1, RuleSpec::Tensor { radial: 24, angular: 48 }).unwrap())
}

proptest! {
    #[test]
    fn mobius_is_an_involution((a, z) in pair(0.99)) {
        let m = MoebiusMap::new(a).unwrap();
        let back = m.apply(&m.apply(&z).unwrap()).unwrap();
        prop_assert!(back.distance_euclid(&z) < 1e-12);
    }

    #[test]
    fn defect_identity((a, z) in pair(0.99)) {
        let w = MoebiusMap::new(a).unwrap().apply(&z).unwrap();
        let want = a.defect() * z.defect() / (Complex64::new(1.0, 0.0) - z.inner(&a)).norm_sqr();
        prop_assert!((w.defect() - want).abs() <= 1e-12 * want.max(1e-3));
    }

    #[test]
    fn distance_is_symmetric_and_invariant((a, z, w) in triple(0.95)) {
        let d = bergman_distance(&z, &w).unwrap();
        prop_assert!((d - bergman_distance(&w, &z).unwrap()).abs() < 1e-12);
        let m = MoebiusMap::new(a).unwrap();
        let moved = bergman_distance(&m.apply(&z).unwrap(), &m.apply(&w).unwrap()).unwrap();
        prop_assert!((d - moved).abs() < 1e-9 * d.max(1.0));
    }

    #[test]
    fn triangle_inequality((a, z, w) in triple(0.95)) {
        let (az, zw, aw) =
            (bergman_distance(&a, &z).unwrap(), bergman_distance(&z, &w).unwrap(), bergman_distance(&a, &w).unwrap());
        prop_assert!(aw <= az + zw + 1e-10);
    }

    #[test]
    fn geodesic_splits_distance((z, w) in pair(0.95), t in 0.0f64..1.0) {
        let g = geodesic_point(&z, &w, t).unwrap();
        let d = bergman_distance(&z, &w).unwrap();
        prop_assert!((bergman_distance(&z, &g).unwrap() - t * d).abs() < 1e-9);
        prop_assert!((bergman_distance(&g, &w).unwrap() - (1.0 - t) * d).abs() < 1e-9);
    }

    #[test]
    fn kernel_is_hermitian((z, w) in pair(0.95), alpha in -0.9f64..4.0) {
        let kp = KernelParams::new(z.dim(), alpha).unwrap();
        let a = kernel_eval(&kp, &z, &w).unwrap();
        let b = kernel_eval(&kp, &w, &z).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn berezin_preserves_positivity_and_bounds(r in 0.0f64..0.9, theta in 0.0f64..std::f64::consts::TAU, sigma in 0.0f64..3.0, s in 0.5f64..3.0) {
        // 0 < (1−|w|²)^s ≤ 1 so the transform lies in (0, 1]
        let z = Point::new(&[Complex64::from_polar(r, theta)]).unwrap();
        let f = Symbol::defect_power(1, s);
        let b = berezin(&BerezinParams::ordinary(1, sigma).unwrap(), &f, &z, disk_rule()).unwrap();
        prop_assert!(b.re > 0.0 && b.re <= 1.0 + 1e-12 && b.im.abs() < 1e-12);
    }
}
