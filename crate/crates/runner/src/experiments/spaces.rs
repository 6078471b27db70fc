use bergman_lab::analysis::{
    ba_estimate, bmo_estimate, bo_estimate, decompose_bmo, estimator_points, space_norm_estimate, EstimatorSettings,
};
use bergman_lab::geometry::{sampling::uniform_ball, Point};
use bergman_lab::symbols::{gradient, invariant_gradient_norm, max_principle_probe, Symbol};

use super::{num, Ctx};
use crate::error::RunResult;
use crate::report::{sig17, Check};

/// Symbols for the one-variable invariant-gradient identity.
const IDENTITY_SYMBOLS: [&str; 3] = ["z", "z_sq", "log_pole"];

pub(crate) fn e9(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let n = cfg.dims[0];
    let rule = ctx.rule(0)?;
    let settings = EstimatorSettings { sigma: cfg.sigma, ..EstimatorSettings::default() };
    let points = estimator_points(None, &settings, n);
    let mut k_suite = 0.0_f64;
    let mut rows = Vec::new();
    for id in &cfg.symbols {
        let f = num("symbol", Symbol::named(id, n))?;
        let mut est = num("space estimate", space_norm_estimate(&f, cfg.p, cfg.gamma, cfg.r, None, &rule, &settings))?;
        est.symbol_id = Some(id.clone());
        ctx.json(&format!("estimate_{id}.json"), &est)?;

        let dec = num("decomposition", decompose_bmo(&f, cfg.r, cfg.sigma, &rule))?;
        let bmo = num("bmo", bmo_estimate(&f, cfg.p, cfg.gamma, cfg.r, cfg.sigma, &points, &rule))?;
        let bo = num("bo of the averaged part", bo_estimate(&dec.average_part(), cfg.gamma, &points))?;
        let ba = num(
            "ba of the remainder",
            ba_estimate(&dec.remainder_part(), cfg.p, cfg.gamma, cfg.r, cfg.sigma, &points, &rule),
        )?;
        let k = bo.max(ba) / bmo;
        ctx.report.log(format!("{id} bmo"), bmo);
        ctx.report.log(format!("{id} bo(f1)"), bo);
        ctx.report.log(format!("{id} ba(f2)"), ba);
        ctx.report.check(Check::at_most(format!("{id}: max(bo, ba) finite"), bo.max(ba), f64::MAX));
        k_suite = k_suite.max(k);

        let profile = &est.decay_profile;
        let (first, last) = (profile[0].1, profile[profile.len() - 1].1);
        ctx.report.log(format!("{id} profile ratio"), last / first);
        match id.as_str() {
            "one_minus_abs_sq" => {
                let rises = profile.windows(2).filter(|w| w[1].1 > w[0].1).count();
                ctx.report.check(Check::at_most(format!("{id}: profile rises"), rises as f64, 0.0));
                ctx.report.check(Check::at_most(format!("{id}: profile at {} / at {}", profile[profile.len() - 1].0, profile[0].0), last / first, 0.1));
            }
            "re_z" => {
                ctx.report.check(Check::at_least(format!("{id}: profile at {} / at {}", profile[profile.len() - 1].0, profile[0].0), last / first, 0.5));
            }
            _ => {}
        }
        for (r, v) in profile {
            rows.push(vec![id.clone(), sig17(*r), sig17(*v)]);
        }
    }
    ctx.report.log("K", k_suite);
    ctx.report.check(Check::at_most("K = max over suite of max(bo, ba)/bmo, finite", k_suite, f64::MAX));
    ctx.csv("profiles.csv", &["symbol", "radius", "shell_max_mo"], &rows)
}

pub(crate) fn e10(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let n = *cfg.dims.iter().find(|&&n| n >= 2).expect("validated");
    let mut rows = Vec::new();
    for id in &cfg.symbols {
        let f = num("symbol", Symbol::named(id, n))?;
        let profile = num("tangential probe", max_principle_probe(&f, &cfg.radii))?;
        for (r, v) in &profile {
            rows.push(vec![id.clone(), sig17(*r), sig17(*v)]);
        }
        if f.is_constant() {
            let max = profile.iter().map(|p| p.1).fold(0.0, f64::max);
            ctx.report.check(Check::at_most(format!("{id}: tangential gradient vanishes"), max, 0.0));
        } else {
            let (first, last) = (profile[0], profile[profile.len() - 1]);
            ctx.report.check(Check::at_least(format!("{id}: shell sup at {} / at {}", last.0, first.0), last.1 / first.1, 0.5));
        }
    }
    ctx.csv("tangential.csv", &["symbol", "radius", "shell_sup"], &rows)?;

    let pts: Vec<Point> = uniform_ball(1, 0.999, cfg.samples.max(200), cfg.seed);
    let mut err = 0.0_f64;
    for id in IDENTITY_SYMBOLS {
        let f = num("symbol", Symbol::named(id, 1))?;
        for z in &pts {
            let lhs = num("invariant gradient", invariant_gradient_norm(&f, z))?;
            let rhs = z.defect() * num("gradient", gradient(&f, z))?.grad[0].norm();
            err = err.max((lhs - rhs).abs());
        }
    }
    ctx.report.check(Check::at_most("n=1 |∇̃f| - (1-|z|^2)|f'|", err, 1e-10));
    Ok(())
}
