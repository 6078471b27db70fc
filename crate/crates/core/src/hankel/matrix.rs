use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::MAX_DIM;
use crate::numeric::{ball_moment, kernel_coefficient, weight_constant};
use crate::symbols::{multi_indices, LogFactor, Symbol, Term};

/// Largest domain dimension accepted by [`truncated_matrix`].
pub const MAX_DOMAIN: usize = 300;

/// Gram eigenvalues below this fraction of the largest are dropped.
pub const RANK_FLOOR: f64 = 1e-12;

/// Default Taylor degree used when a symbol carries pole factors.
pub const DEFAULT_POLE_DEGREE: u32 = 4000;

/// Matrix of `H^β_f` from the orthonormal monomials of `A²_α` of degree
/// `≤ N` into an orthonormal basis of the image in `L²_β`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruncatedOperator {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_id: Option<String>,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "N")]
    pub truncation: u32,
    pub singular_values: Vec<f64>,
    #[serde(skip)]
    pub domain: Vec<[u32; MAX_DIM]>,
    /// Rows: codomain basis; columns: domain basis.
    #[serde(skip)]
    pub matrix: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn top(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

type Frequency = [i64; MAX_DIM];

fn frequency(t: &Term) -> Frequency {
    let mut d = [0; MAX_DIM];
    for i in 0..MAX_DIM {
        d[i] = i64::from(t.holo[i]) - i64::from(t.anti[i]);
    }
    d
}

fn add(a: &[u32; MAX_DIM], b: &[u32; MAX_DIM]) -> [u32; MAX_DIM] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Exact matrix and singular values of the truncated Hankel operator.
///
/// The Gram matrix `⟨He_j, He_k⟩_β = ⟨fe_j, fe_k⟩_β − ⟨Pfe_j, Pfe_k⟩_β` is
/// assembled from closed-form moments; its Hermitian eigendecomposition
/// `V Λ V*` gives the singular values `√Λ` and the matrix `Λ^{1/2} V*`.
/// Pole factors are replaced by Taylor polynomials of degree `pole_degree`.
pub fn truncated_matrix(f: &Symbol, alpha: f64, beta: f64, truncation: u32, pole_degree: u32) -> Result<TruncatedOperator> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::Parameter("alpha and beta must exceed -1".into()));
    }
    let n = f.dim();
    let has_other_logs = f
        .terms()
        .iter()
        .any(|t| t.logs.iter().any(|l| !matches!(l, LogFactor::Pole { .. })));
    if has_other_logs {
        return Err(Error::Unsupported(
            "truncated matrices need symbols without radial or hyperbolic log factors".into(),
        ));
    }
    let f = f.expand_poles(pole_degree);
    for t in f.terms() {
        if !(beta + 2.0 * t.radial_power.min(0.0) > -1.0) {
            return Err(Error::Unsupported(format!(
                "radial power {} is not square integrable against dv_{beta}",
                t.radial_power
            )));
        }
    }
    let domain: Vec<[u32; MAX_DIM]> = (0..=truncation).flat_map(|d| multi_indices(n, d)).collect();
    if domain.len() > MAX_DOMAIN {
        return Err(Error::Parameter(format!(
            "domain dimension {} exceeds the cap of {MAX_DOMAIN}",
            domain.len()
        )));
    }
    // holomorphic polynomial terms are fixed by the projection; dropping them
    // avoids pure cancellation noise in the Gram matrix
    let terms: Vec<Term> = f.terms().iter().filter(|t| !t.is_holomorphic()).cloned().collect();
    let terms = &terms[..];
    let c_beta = weight_constant(n, beta);
    let lambda = n as f64 + 1.0 + beta;
    let scale: Vec<f64> = domain
        .iter()
        .map(|j| (weight_constant(n, alpha) * ball_moment(n, &j[..n], alpha)).sqrt().recip())
        .collect();

    let mut groups: HashMap<Frequency, Vec<usize>> = HashMap::new();
    for (i, t) in terms.iter().enumerate() {
        groups.entry(frequency(t)).or_default().push(i);
    }

    // P_β(f e_j) as coefficients of holomorphic monomials z^L
    let projected: Vec<HashMap<[u32; MAX_DIM], Complex64>> = domain
        .par_iter()
        .zip(&scale)
        .map(|(j, &s)| {
            let mut out: HashMap<[u32; MAX_DIM], Complex64> = HashMap::new();
            for t in terms {
                let m = add(&t.holo, j);
                let mut l = [0; MAX_DIM];
                let mut ok = true;
                for i in 0..MAX_DIM {
                    match m[i].checked_sub(t.anti[i]) {
                        Some(v) => l[i] = v,
                        None => ok = false,
                    }
                }
                if ok {
                    let c = t.coef
                        * s
                        * kernel_coefficient(lambda, &l[..n])
                        * c_beta
                        * ball_moment(n, &m[..n], beta + t.radial_power);
                    *out.entry(l).or_default() += c;
                }
            }
            out
        })
        .collect();

    let size = domain.len();
    let entries: Vec<(usize, usize, Complex64)> = (0..size)
        .into_par_iter()
        .flat_map_iter(|a| (a..size).map(move |b| (a, b)))
        .map(|(ja, jb)| {
            let (j, k) = (&domain[ja], &domain[jb]);
            let mut acc = Complex64::new(0.0, 0.0);
            for ta in terms {
                let mut want = frequency(ta);
                for i in 0..MAX_DIM {
                    want[i] += i64::from(j[i]) - i64::from(k[i]);
                }
                let Some(partners) = groups.get(&want) else { continue };
                for &ib in partners {
                    let tb = &terms[ib];
                    let idx = add(&add(&ta.holo, j), &tb.anti);
                    acc += ta.coef
                        * tb.coef.conj()
                        * c_beta
                        * ball_moment(n, &idx[..n], beta + ta.radial_power + tb.radial_power);
                }
            }
            acc *= scale[ja] * scale[jb];
            let (pa, pb) = (&projected[ja], &projected[jb]);
            for (l, ca) in pa {
                if let Some(cb) = pb.get(l) {
                    acc -= ca * cb.conj() * c_beta * ball_moment(n, &l[..n], beta);
                }
            }
            (ja, jb, acc)
        })
        .collect();

    let mut gram = DMatrix::<Complex64>::zeros(size, size);
    for (a, b, v) in entries {
        gram[(a, b)] = v;
        gram[(b, a)] = v.conj();
    }
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    // rank truncation: eigenvalues below RANK_FLOOR of the top one are noise
    let floor = RANK_FLOOR * eig.eigenvalues.max().max(0.0);
    let singular_values: Vec<f64> = order
        .iter()
        .map(|&i| {
            let v = eig.eigenvalues[i];
            if v > floor { v.sqrt() } else { 0.0 }
        })
        .collect();
    let mut matrix = DMatrix::<Complex64>::zeros(size, size);
    for (row, &i) in order.iter().enumerate() {
        let s = singular_values[row];
        for col in 0..size {
            matrix[(row, col)] = eig.eigenvectors[(col, i)].conj() * s;
        }
    }
    Ok(TruncatedOperator {
        symbol_id: None,
        alpha,
        beta,
        truncation,
        singular_values,
        domain,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holomorphic_symbols_give_zero() {
        for id in ["z", "z_sq", "log_pole", "one"] {
            let op = truncated_matrix(&Symbol::named(id, 1).unwrap(), 0.0, 0.0, 10, 200).unwrap();
            assert_eq!(op.top(), 0.0, "{id}");
        }
        let op = truncated_matrix(&Symbol::named("z1z2", 2).unwrap(), 1.0, 1.0, 5, 10).unwrap();
        assert_eq!(op.top(), 0.0);
    }

    #[test]
    fn conjugate_coordinate_closed_form() {
        let op = truncated_matrix(&Symbol::named("zbar", 1).unwrap(), 0.0, 0.0, 40, 0).unwrap();
        let mut want: Vec<f64> = (0..=40).map(|m| 1.0 / (((m + 1) * (m + 2)) as f64).sqrt()).collect();
        want.sort_by(|a, b| b.total_cmp(a));
        for (s, w) in op.singular_values.iter().zip(&want) {
            assert!((s - w).abs() < 1e-12);
        }
    }

    #[test]
    fn matrix_reproduces_gram() {
        let f = &Symbol::named("zbar_sq", 2).unwrap() + &Symbol::named("z1z2", 2).unwrap();
        let op = truncated_matrix(&f, 0.5, 1.0, 4, 0).unwrap();
        let m = &op.matrix;
        let svd = m.clone().svd(false, false);
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in s.iter().zip(&op.singular_values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn nested_truncation_is_monotone() {
        let f = Symbol::named("log_pole_bar", 1).unwrap();
        let tops: Vec<f64> =
            [2, 5, 10, 20].iter().map(|&n| truncated_matrix(&f, 0.0, 0.0, n, 500).unwrap().top()).collect();
        assert!(tops.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{tops:?}");
    }

    #[test]
    fn rejects_unsupported() {
        assert!(truncated_matrix(&Symbol::named("hyperbolic", 1).unwrap(), 0.0, 0.0, 3, 10).is_err());
        assert!(truncated_matrix(&Symbol::named("zbar", 2).unwrap(), 0.0, 0.0, 30, 0).is_err());
        assert!(truncated_matrix(&Symbol::named("zbar", 1).unwrap(), -1.0, 0.0, 3, 0).is_err());
    }

    #[test]
    fn json_fields() {
        let op = truncated_matrix(&Symbol::named("zbar", 1).unwrap(), 0.0, 0.0, 3, 0).unwrap();
        let v = serde_json::to_value(&op).unwrap();
        for key in ["alpha", "beta", "N", "singular_values"] {
            assert!(v.get(key).is_some());
        }
    }
}
