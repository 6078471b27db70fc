//! Small numeric kernels shared by the rest of the crate: pairwise
//! summation, log-gamma based moment formulas, Pochhammer symbols.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise (cascade) summation. The result depends only on the order of
/// `values`, never on how the values were produced, which keeps parallel
/// evaluation bit-reproducible.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Complex counterpart of [`pairwise_sum`].
pub fn pairwise_sum_complex(values: &[Complex64]) -> Complex64 {
    if values.len() <= PAIRWISE_BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum_complex(&values[..mid]) + pairwise_sum_complex(&values[mid..])
    }
}

pub fn ln_factorial(k: u32) -> f64 {
    ln_gamma(f64::from(k) + 1.0)
}

/// `∫_{B_n} |w^m|² (1−|w|²)^a dv(w)` for the normalized volume measure,
/// i.e. `n! m! Γ(a+1) / Γ(n+|m|+a+1)`. Requires `a > −1`.
pub fn ball_moment(n: usize, m: &[u32], a: f64) -> f64 {
    debug_assert!(a > -1.0);
    let total: u32 = m.iter().sum();
    let k = n as u32 + total;
    if k <= PRODUCT_CUTOFF {
        // n! Π m_i! / Π_{i=1}^{k} (a+i): both sides have k factors, so pair
        // them in increasing order to stay in range
        let mut numer: Vec<u32> = (1..=n as u32).collect();
        for &mi in m {
            numer.extend(1..=mi);
        }
        numer.sort_unstable();
        return numer
            .iter()
            .enumerate()
            .map(|(i, &u)| f64::from(u) / (a + i as f64 + 1.0))
            .product();
    }
    let mut log = ln_factorial(n as u32) + ln_gamma(a + 1.0) - ln_gamma(f64::from(k) + a + 1.0);
    for &mi in m {
        log += ln_factorial(mi);
    }
    log.exp()
}

const PRODUCT_CUTOFF: u32 = 256;

/// `c_α = Γ(n+α+1) / (n! Γ(α+1))`, the constant making `c_α (1−|z|²)^α dv`
/// a probability measure.
pub fn weight_constant(n: usize, alpha: f64) -> f64 {
    (ln_gamma(n as f64 + alpha + 1.0) - ln_factorial(n as u32) - ln_gamma(alpha + 1.0)).exp()
}

/// Rising factorial `(x)_k` divided by the multinomial `l!`, i.e. the
/// coefficient of `z^l w̄^l` in the expansion of `(1−⟨z,w⟩)^{−x}`.
pub fn kernel_coefficient(x: f64, l: &[u32]) -> f64 {
    let total: u32 = l.iter().sum();
    if total <= PRODUCT_CUTOFF {
        let mut denom: Vec<u32> = Vec::with_capacity(total as usize);
        for &li in l {
            denom.extend(1..=li);
        }
        denom.sort_unstable();
        return denom
            .iter()
            .enumerate()
            .map(|(i, &u)| (x + i as f64) / f64::from(u))
            .product();
    }
    let mut log = ln_gamma(x + f64::from(total)) - ln_gamma(x);
    for &li in l {
        log -= ln_factorial(li);
    }
    log.exp()
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        // Tricomi initial guess, refined by Newton on the three-term recurrence.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=count {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            derivative = nf * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / derivative;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        // map [-1, 1] -> [0, 1], ascending
        nodes[i] = 0.5 * (1.0 - x);
        nodes[count - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[count - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre_unit(12);
        for k in 0..24 {
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((approx - 1.0 / f64::from(k + 1)).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn single_node_rule() {
        let (x, w) = gauss_legendre_unit(1);
        assert_eq!(x, vec![0.5]);
        assert!((w[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weight_constants() {
        assert!((weight_constant(1, 0.0) - 1.0).abs() < 1e-14);
        assert!((weight_constant(1, 1.0) - 2.0).abs() < 1e-13);
        assert!((weight_constant(2, 1.0) - 3.0).abs() < 1e-13);
    }

    #[test]
    fn moments_match_elementary_values() {
        assert!((ball_moment(1, &[1], 0.0) - 0.5).abs() < 1e-13);
        assert!((ball_moment(1, &[0], 1.0) - 0.5).abs() < 1e-13);
        // n = 2: ∫|z1|²dv = 1/3
        assert!((ball_moment(2, &[1, 0], 0.0) - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }
}
