use bergman_lab::analysis::{berezin, project_quadrature_batch, BerezinParams, KernelParams};
use bergman_lab::geometry::{build_lattice, sampling::uniform_ball, Point};
use bergman_lab::numeric::{ball_moment, weight_constant};
use bergman_lab::quadrature::{forelli_rudin_probe, integrate_real, separated_sum_probe};
use bergman_lab::symbols::{multi_indices, Symbol, Term};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{num, Ctx};
use crate::error::RunResult;
use crate::report::{sig17, Check};

pub(crate) fn e3(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let mut rows = Vec::new();
    for (i, &n) in cfg.dims.iter().enumerate() {
        let rule = ctx.rule(i)?;
        for &alpha in &cfg.alphas {
            let c = weight_constant(n, alpha);
            let (mut worst_abs, mut worst_rel) = (0.0_f64, 0.0_f64);
            for d in 0..=cfg.truncation {
                for m in multi_indices(n, d) {
                    let m = &m[..n];
                    let q = num("moment", integrate_real(&rule, |w| {
                        let mono: f64 = m.iter().enumerate().map(|(j, &e)| w.coord(j).norm_sqr().powi(e as i32)).product();
                        Ok(c * mono * w.defect().powf(alpha))
                    }))?;
                    let oracle = c * ball_moment(n, m, alpha);
                    worst_abs = worst_abs.max((q - oracle).abs());
                    worst_rel = worst_rel.max(((q - oracle) / oracle).abs());
                }
            }
            let mass = num("mass", integrate_real(&rule, |w| Ok(c * w.defect().powf(alpha))))?;
            ctx.report.check(Check::at_most(format!("n={n} alpha={alpha} moments |m|<={}", cfg.truncation), worst_abs, 1e-8));
            ctx.report.log(format!("n={n} alpha={alpha} worst relative moment error"), worst_rel);
            ctx.report.check(Check::at_most(format!("n={n} alpha={alpha} |v_alpha(B)-1|"), (mass - 1.0).abs(), 1e-10));
            rows.push(vec![n.to_string(), sig17(alpha), sig17(worst_abs), sig17(worst_rel), sig17(mass)]);
        }
        // c_1 from the quadrature mass of (1-|z|^2)
        let c1 = 1.0 / num("c_1", integrate_real(&rule, |w| Ok(w.defect())))?;
        ctx.report.check(Check::at_most(format!("n={n} |c_1 - {}|", n + 1), (c1 - (n + 1) as f64).abs(), 1e-8));
        ctx.json(&format!("selftest_n{n}.json"), rule.self_test())?;
    }
    ctx.csv("moments.csv", &["n", "alpha", "worst_abs", "worst_rel", "mass"], &rows)
}

/// Random holomorphic polynomial with all monomials of degree `≤ degree`.
fn random_polynomial(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> Symbol {
    let mut terms = Vec::new();
    for d in 0..=degree {
        for m in multi_indices(n, d) {
            let coef = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            terms.push(Term::monomial(coef, &m[..n], &[]));
        }
    }
    Symbol::new(n, terms).expect("valid polynomial")
}

pub(crate) fn e4(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    let berezin_radius = *cfg.radii.last().expect("validated");
    for (i, &n) in cfg.dims.iter().enumerate() {
        let rule = ctx.rule(i)?;
        let pts = uniform_ball(n, cfg.radii[i], cfg.samples, cfg.seed.wrapping_add(i as u64));
        let tol = if n == 1 { 1e-8 } else { 1e-6 };
        for &alpha in &cfg.alphas {
            let kp = num("kernel", KernelParams::new(n, alpha))?;
            let f = random_polynomial(n, cfg.truncation, &mut rng);
            let proj = num("reproducing", project_quadrature_batch(&kp, &f, &pts, &rule))?;
            let mut err = 0.0_f64;
            for (z, v) in pts.iter().zip(&proj) {
                err = err.max((v - num("eval", f.eval(z))?).norm());
            }
            ctx.report.check(Check::at_most(
                format!("n={n} alpha={alpha} |P f - f|, deg<={}, |z|<={}", cfg.truncation, cfg.radii[i]),
                err,
                tol,
            ));
            rows.push(vec!["reproducing".into(), n.to_string(), sig17(alpha), sig17(err)]);
        }
        if n == 1 {
            let kp = num("kernel", KernelParams::new(1, 0.0))?;
            let zbar = num("symbol", Symbol::named("zbar", 1))?;
            let v = num("P_0(zbar)", project_quadrature_batch(&kp, &zbar, &pts, &rule))?;
            let err = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
            ctx.report.check(Check::at_most("|P_0(zbar)|", err, 1e-8));
            rows.push(vec!["P_0(zbar)".into(), "1".into(), sig17(0.0), sig17(err)]);
            let abs_sq = num("symbol", Symbol::named("abs_sq", 1))?;
            for &beta in &cfg.alphas {
                let kp = num("kernel", KernelParams::new(1, beta))?;
                let v = num("P_beta(|z|^2)", project_quadrature_batch(&kp, &abs_sq, &pts, &rule))?;
                let want = 1.0 / (beta + 2.0);
                let err = v.iter().map(|x| (x - want).norm()).fold(0.0, f64::max);
                ctx.report.check(Check::at_most(format!("|P_{beta}(|z|^2) - 1/({beta}+2)|"), err, 1e-8));
                rows.push(vec!["P_beta(abs_sq)".into(), "1".into(), sig17(beta), sig17(err)]);
            }
        }
        // B_sigma(1) along a radial segment up to the Berezin radius
        let dir = bergman_lab::geometry::sampling::sphere_directions(n, 1, cfg.seed)[0];
        let one = Symbol::real_constant(n, 1.0);
        for &sigma in &cfg.alphas {
            let bp = num("berezin", BerezinParams::ordinary(n, sigma))?;
            let mut err = 0.0_f64;
            for k in 0..=19 {
                let z = dir.scale(berezin_radius * k as f64 / 19.0);
                err = err.max((num("berezin", berezin(&bp, &one, &z, &rule))? - 1.0).norm());
            }
            ctx.report.check(Check::at_most(format!("n={n} |B_{sigma}(1) - 1| up to |z|={berezin_radius}"), err, 1e-8));
            rows.push(vec!["berezin(1)".into(), n.to_string(), sig17(sigma), sig17(err)]);
        }
    }
    ctx.csv("projection.csv", &["check", "n", "weight", "max_error"], &rows)
}

const E5_PAIRS: [(f64, f64); 6] = [(0.0, 0.5), (0.0, 1.0), (0.0, 2.0), (0.5, 0.5), (0.5, 1.0), (0.5, 2.0)];
const SEPARATED_PAIR: (f64, f64) = (1.5, 3.0);

pub(crate) fn e5(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let n = cfg.dims[0];
    let rule = ctx.rule(0)?;
    let dir = bergman_lab::geometry::sampling::sphere_directions(n, 1, cfg.seed)[0];
    let pts: Vec<Point> = cfg.radii.iter().map(|&r| dir.scale(r)).collect();
    let mut rows = Vec::new();
    for d in [0.0, 1.0] {
        for (t, s) in E5_PAIRS {
            let vals: Vec<f64> = pts
                .iter()
                .map(|z| num("forelli-rudin", forelli_rudin_probe(t, s, d, z, &rule)))
                .collect::<RunResult<_>>()?;
            let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            ctx.report.check(Check::at_most(format!("d={d} (t,s)=({t},{s}) max/min over |z|"), hi / lo, 3.0));
            for (r, v) in cfg.radii.iter().zip(&vals) {
                rows.push(vec!["forelli_rudin".into(), sig17(d), sig17(t), sig17(s), sig17(*r), sig17(*v)]);
            }
        }
    }
    let lat = num("lattice", build_lattice(n, cfg.r, cfg.max_modulus))?;
    let (t, s) = SEPARATED_PAIR;
    let vals: Vec<f64> =
        pts.iter().map(|z| num("separated sum", separated_sum_probe(&lat, t, s, z))).collect::<RunResult<_>>()?;
    let at_zero = num("separated sum", separated_sum_probe(&lat, t, s, &Point::origin(n)))?;
    let hi = vals.iter().copied().fold(0.0, f64::max);
    ctx.report.check(Check::at_most(format!("separated sum (t,s)=({t},{s}) max / value at 0"), hi / at_zero, 10.0));
    for (r, v) in cfg.radii.iter().zip(&vals) {
        rows.push(vec!["separated_sum".into(), "".into(), sig17(t), sig17(s), sig17(*r), sig17(*v)]);
    }
    ctx.csv("probes.csv", &["probe", "d", "t", "s", "radius", "value"], &rows)
}
