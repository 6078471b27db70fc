use bergman_lab::geometry::build_lattice;
use bergman_lab::hankel::{compactness_decay, truncated_matrix, write_sweep_csv, HankelParams, DEFAULT_POLE_DEGREE};
use bergman_lab::numeric::{ball_moment, weight_constant};
use bergman_lab::symbols::{bloch_norm, Symbol};

use super::{num, Ctx};
use crate::error::RunResult;
use crate::report::{sig17, Check};

/// Truncations of the growth comparison in the unbounded regime.
const GROWTH_N: (u32, u32) = (8, 64);
/// Truncations for the stability of the top singular value.
const STABILITY_N: [u32; 3] = [10, 20, 40];
/// Shells added to the lattice in Bloch-norm estimates.
const BLOCH_SHELLS: [f64; 4] = [0.5, 0.9, 0.99, 0.997];

fn symbol(id: &str, n: usize) -> RunResult<Symbol> {
    num("symbol", Symbol::named(id, n))
}

/// `‖z^k‖²_β` in one variable.
fn mono_sq(k: u32, w: f64) -> f64 {
    weight_constant(1, w) * ball_moment(1, &[k], w)
}

/// Singular values of `H^β_{z̄}` on `z^m / ‖z^m‖_α`: `H z^m = z̄z^m − m/(m+1+β) z^{m−1}`,
/// and the images are mutually orthogonal.
fn zbar_closed_form(alpha: f64, beta: f64, truncation: u32) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=truncation)
        .map(|m| {
            let c = m as f64 / (m as f64 + 1.0 + beta);
            let proj = if m == 0 { 0.0 } else { c * c * mono_sq(m - 1, beta) };
            ((mono_sq(m + 1, beta) - proj) / mono_sq(m, alpha)).max(0.0).sqrt()
        })
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub(crate) fn e6(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let zbar = symbol("zbar", 1)?;
    let (alpha, growth_alpha) = (cfg.alphas[0], cfg.alphas[1]);
    let mut op = num("truncated matrix", truncated_matrix(&zbar, alpha, cfg.beta, cfg.truncation, 0))?;
    op.symbol_id = Some("zbar".into());
    let want = zbar_closed_form(alpha, cfg.beta, cfg.truncation);
    let err = op.singular_values.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ctx.report.check(Check::at_most(format!("closed-form singular values, N={}", cfg.truncation), err, 1e-10));
    ctx.json("zbar_exact.json", &op)?;
    let top = want[0];
    let mut drift = 0.0_f64;
    for n in STABILITY_N {
        let t = num("truncated matrix", truncated_matrix(&zbar, alpha, cfg.beta, n, 0))?.top();
        ctx.report.log(format!("top N={n}"), t);
        drift = drift.max((t - top).abs());
    }
    ctx.report.check(Check::at_most("top singular value drift over N", drift, 1e-10));

    let hp = num("params", HankelParams::new(1, cfg.p, cfg.q, growth_alpha, cfg.beta))?;
    ctx.report.log("growth regime gamma", hp.gamma());
    let mut tops = Vec::new();
    for n in [GROWTH_N.0, GROWTH_N.1] {
        let mut op = num("truncated matrix", truncated_matrix(&zbar, growth_alpha, cfg.beta, n, 0))?;
        op.symbol_id = Some("zbar".into());
        tops.push(op.top());
        ctx.json(&format!("zbar_alpha{growth_alpha}_N{n}.json"), &op)?;
    }
    ctx.report.check(Check::at_least(
        format!("top growth N={} -> N={} at alpha={growth_alpha}", GROWTH_N.0, GROWTH_N.1),
        tops[1] / tops[0],
        4.0,
    ));
    Ok(())
}

/// For holomorphic `f` the operator `H_f` vanishes; the Bloch comparison is
/// carried by `H_{f̄}`.
pub(crate) fn e7(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let lat = num("lattice", build_lattice(1, cfg.r, cfg.max_modulus))?;
    let mut ratios = Vec::new();
    let mut rows = Vec::new();
    for id in &cfg.symbols {
        let f = symbol(id, 1)?;
        let mut op = num("truncated matrix", truncated_matrix(&f.conj(), cfg.alpha, cfg.beta, cfg.truncation, DEFAULT_POLE_DEGREE))?;
        op.symbol_id = Some(format!("conj({id})"));
        ctx.json(&format!("{id}_conj.json"), &op)?;
        let b = num("bloch", bloch_norm(&f, 1.0, Some(&lat), &BLOCH_SHELLS))?;
        let ratio = op.top() / b.norm;
        ctx.report.log(format!("{id} top"), op.top());
        ctx.report.log(format!("{id} Bloch norm"), b.norm);
        ctx.report.log(format!("{id} ratio"), ratio);
        if id == "log_pole" {
            ctx.report.check(Check::at_least("log(1/(1-z)) Bloch estimate lower", b.norm, 1.9));
            ctx.report.check(Check::at_most("log(1/(1-z)) Bloch estimate upper", b.norm, 2.0));
        }
        rows.push(vec![id.clone(), sig17(op.top()), sig17(b.norm), sig17(ratio)]);
        ratios.push(ratio);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    ctx.report.log("c1", lo);
    ctx.report.log("c2", hi);
    ctx.report.check(Check::at_most("c2/c1 across the family", hi / lo, 10.0));
    ctx.csv("bloch_comparison.csv", &["symbol", "top_singular_value", "bloch_norm", "ratio"], &rows)
}

/// The first symbol is expected to give compact operators, the second not.
pub(crate) fn e8(ctx: &mut Ctx) -> RunResult<()> {
    let cfg = ctx.cfg;
    let n = cfg.dims[0];
    let rule = ctx.rule(0)?;
    let hp = num("params", HankelParams::new(n, cfg.p, cfg.q, cfg.alpha, cfg.beta))?;
    let (first, last) = (cfg.radii[0], *cfg.radii.last().expect("radii"));
    for (k, id) in cfg.symbols.iter().enumerate() {
        let f = symbol(id, n)?;
        let rows = num("probe sweep", compactness_decay(&f, &hp, &cfg.radii, &rule))?;
        let file = ctx.create(&format!("sweep_{id}.csv"))?;
        write_sweep_csv(&rows, file)?;
        let along_e1: Vec<f64> = rows.iter().filter(|r| r.direction_index == 0).map(|r| r.result.probe_f).collect();
        let max_at = |radius: f64| {
            rows.iter().filter(|r| r.radius == radius).map(|r| r.result.probe_f).fold(0.0, f64::max)
        };
        let mut worst_ratio = 0.0_f64;
        for r in &rows {
            if let Some(x) = r.result.necessity_ratio() {
                worst_ratio = worst_ratio.max(x);
            }
        }
        ctx.report.log(format!("{id} empirical necessity constant"), worst_ratio);
        if k == 0 {
            let ratio = max_at(last) / max_at(first);
            ctx.report.check(Check::at_most(format!("{id}: max probe at {last} / at {first}"), ratio, 0.2));
            let rises = along_e1.windows(2).filter(|w| !(w[1] < w[0])).count();
            ctx.report.check(Check::at_most(format!("{id}: non-decreasing steps along e1"), rises as f64, 0.0));
        } else {
            let ratio = along_e1[along_e1.len() - 1] / along_e1[0];
            ctx.report.check(Check::at_least(format!("{id}: probe along e1 at {last} / at {first}"), ratio, 0.5));
        }
    }
    Ok(())
}
