use bergman_lab::geometry::{
    bergman_distance, build_lattice, check_covering, covering_multiplicity, geodesic_point, sampling::uniform_ball,
    MoebiusMap, Point,
};

use super::{num, Ctx};
use crate::error::RunResult;
use crate::report::{sig17, Check};

/// Dilation factor of the multiplicity balls `D(a_k, 4r)`.
const MULTIPLICITY_FACTOR: f64 = 4.0;
/// Sampling region of the random pairs.
const PAIR_RADIUS: f64 = 0.99;

pub(crate) fn e1(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let mut rows = Vec::new();
    for &n in &cfg.dims {
        let seed = cfg.seed ^ (n as u64) << 32;
        let a_pts = uniform_ball(n, PAIR_RADIUS, cfg.samples, seed);
        let z_pts = uniform_ball(n, PAIR_RADIUS, cfg.samples, seed + 1);
        let w_pts = uniform_ball(n, PAIR_RADIUS, cfg.samples, seed + 2);
        let (mut inv, mut ident, mut invariance) = (0.0_f64, 0.0_f64, 0.0_f64);
        for ((a, z), w) in a_pts.iter().zip(&z_pts).zip(&w_pts) {
            let map = num("mobius", MoebiusMap::new(*a))?;
            let fz = num("mobius", map.apply(z))?;
            let back = num("involution", map.apply(&fz))?;
            inv = inv.max(back.distance_euclid(z));
            let rhs = a.defect() * z.defect() / (1.0 - z.inner(a)).norm_sqr();
            ident = ident.max((fz.defect() - rhs).abs());
            let fw = num("mobius", map.apply(w))?;
            let d0 = num("distance", bergman_distance(z, w))?;
            let d1 = num("distance", bergman_distance(&fz, &fw))?;
            invariance = invariance.max((d1 - d0).abs());
        }
        ctx.report.check(Check::at_most(format!("n={n} involution |φ_a(φ_a(z)) − z|"), inv, 1e-12));
        ctx.report.check(Check::at_most(format!("n={n} defect identity"), ident, 1e-12));
        ctx.report.check(Check::at_most(format!("n={n} Möbius invariance of β"), invariance, 1e-10));
        rows.push(vec![n.to_string(), sig17(inv), sig17(ident), sig17(invariance)]);
    }
    let end = num("geodesic", Point::real(&[0.8]))?;
    let mid = num("geodesic", geodesic_point(&Point::origin(1), &end, 0.5))?;
    ctx.report.check(Check::at_most("geodesic midpoint of [0, 0.8] minus 0.5", mid.distance_euclid(&num("geodesic", Point::real(&[0.5]))?), 1e-10));
    ctx.csv("identities.csv", &["n", "involution", "defect_identity", "invariance"], &rows)
}

pub(crate) fn e2(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let n = cfg.dims[0];
    let mut rows = Vec::new();
    for &r in &cfg.radii {
        let lat = num("lattice", build_lattice(n, r, cfg.max_modulus))?;
        ctx.report.check(Check::at_least(format!("r={r} certified separation"), lat.separation(), r / 2.0));
        let cov = num("covering", check_covering(&lat, cfg.samples, cfg.seed))?;
        ctx.report.check(Check::at_most(format!("r={r} uncovered samples"), cov.uncovered as f64, 0.0));
        let f = ctx.create(&format!("lattice_r{r}.csv"))?;
        lat.write_csv(f)?;
        let m = num("multiplicity", covering_multiplicity(&lat, MULTIPLICITY_FACTOR, cfg.samples, cfg.seed))?;
        let half = num("lattice", build_lattice(n, r / 2.0, cfg.max_modulus))?;
        let m_half = num("multiplicity", covering_multiplicity(&half, MULTIPLICITY_FACTOR, cfg.samples, cfg.seed))?;
        ctx.report.log(format!("r={r} centers"), lat.len() as f64);
        ctx.report.log(format!("r={r} multiplicity D(a,4r)"), m as f64);
        ctx.report.log(format!("r={} multiplicity D(a,4r)", r / 2.0), m_half as f64);
        ctx.report.check(Check::at_most(
            format!("r={r} multiplicity change when r halves"),
            (m as f64 - m_half as f64).abs(),
            1.0,
        ));
        rows.push(vec![
            sig17(r),
            lat.len().to_string(),
            sig17(lat.separation()),
            cov.uncovered.to_string(),
            m.to_string(),
            m_half.to_string(),
        ]);
    }
    ctx.csv(
        "certificates.csv",
        &["r", "centers", "separation", "uncovered", "multiplicity", "multiplicity_half_r"],
        &rows,
    )
}
