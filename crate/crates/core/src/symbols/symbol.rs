use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::BallFunction;
use crate::geometry::{Point, MAX_DIM};
use crate::numeric::kernel_coefficient;

/// Distance from the pole ray below which `log(1/(1−⟨z,b⟩))` is not evaluated.
const POLE_GUARD: f64 = 1e-12;

/// Logarithmic factor of a [`Term`].
#[derive(Clone, Debug, PartialEq)]
pub enum LogFactor {
    /// `log(1 − |z|²)`.
    Radial,
    /// `log(1 / (1 − ⟨z, b⟩))` (principal branch), or its conjugate.
    Pole { direction: Point, conjugate: bool },
    /// `β(z, 0) = artanh |z|`.
    Hyperbolic,
}

/// `coef · z^m · z̄^k · (1 − |z|²)^s · Π logs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: Complex64,
    pub holo: [u32; MAX_DIM],
    pub anti: [u32; MAX_DIM],
    pub radial_power: f64,
    pub logs: Vec<LogFactor>,
}

impl Term {
    pub fn monomial(coef: Complex64, holo: &[u32], anti: &[u32]) -> Self {
        let mut h = [0; MAX_DIM];
        let mut a = [0; MAX_DIM];
        h[..holo.len()].copy_from_slice(holo);
        a[..anti.len()].copy_from_slice(anti);
        Self { coef, holo: h, anti: a, radial_power: 0.0, logs: Vec::new() }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.anti.iter().all(|&k| k == 0)
            && self.radial_power == 0.0
            && self.logs.iter().all(|l| matches!(l, LogFactor::Pole { conjugate: false, .. }))
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.holo.iter().all(|&k| k == 0)
            && self.radial_power == 0.0
            && self.logs.iter().all(|l| matches!(l, LogFactor::Pole { conjugate: true, .. }))
    }

    fn conj(&self) -> Self {
        Self {
            coef: self.coef.conj(),
            holo: self.anti,
            anti: self.holo,
            radial_power: self.radial_power,
            logs: self
                .logs
                .iter()
                .map(|l| match l {
                    LogFactor::Pole { direction, conjugate } => {
                        LogFactor::Pole { direction: *direction, conjugate: !conjugate }
                    }
                    other => other.clone(),
                })
                .collect(),
        }
    }

    fn product(&self, other: &Term) -> Term {
        let mut holo = self.holo;
        let mut anti = self.anti;
        for i in 0..MAX_DIM {
            holo[i] += other.holo[i];
            anti[i] += other.anti[i];
        }
        let mut logs = self.logs.clone();
        logs.extend(other.logs.iter().cloned());
        Term { coef: self.coef * other.coef, holo, anti, radial_power: self.radial_power + other.radial_power, logs }
    }

    fn monomial_value(&self, z: &Point) -> Complex64 {
        let mut v = Complex64::new(1.0, 0.0);
        for i in 0..z.dim() {
            let c = z.coord(i);
            if self.holo[i] > 0 {
                v *= c.powu(self.holo[i]);
            }
            if self.anti[i] > 0 {
                v *= c.conj().powu(self.anti[i]);
            }
        }
        v
    }
}

fn log_value(l: &LogFactor, z: &Point) -> Result<Complex64> {
    match l {
        LogFactor::Radial => Ok(Complex64::new(z.defect().ln(), 0.0)),
        LogFactor::Pole { direction, conjugate } => {
            let base = Complex64::new(1.0, 0.0) - z.inner(direction);
            if base.norm() < POLE_GUARD {
                return Err(Error::Evaluation(format!("{z:?} is on the pole of log(1/(1-<z,b>))")));
            }
            let v = -base.ln();
            Ok(if *conjugate { v.conj() } else { v })
        }
        LogFactor::Hyperbolic => Ok(Complex64::new(z.norm().atanh(), 0.0)),
    }
}

/// Wirtinger derivative `∂/∂z_i` of a log factor.
fn log_derivative(l: &LogFactor, z: &Point, i: usize) -> Result<Complex64> {
    match l {
        LogFactor::Radial => Ok(-z.coord(i).conj() / z.defect()),
        LogFactor::Pole { direction, conjugate } => {
            if *conjugate {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let base = Complex64::new(1.0, 0.0) - z.inner(direction);
            if base.norm() < POLE_GUARD {
                return Err(Error::Evaluation(format!("{z:?} is on the pole of log(1/(1-<z,b>))")));
            }
            Ok(direction.coord(i).conj() / base)
        }
        LogFactor::Hyperbolic => {
            let r = z.norm();
            if r == 0.0 {
                return Err(Error::Evaluation("β(·,0) is not differentiable at the origin".into()));
            }
            Ok(z.coord(i).conj() / (2.0 * r * z.defect()))
        }
    }
}

/// A finite sum of [`Term`]s on `B_n`.
///
/// The class is closed under conjugation, sums and products, and every
/// term has explicit derivative rules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolRepr", into = "SymbolRepr")]
pub struct Symbol {
    dim: usize,
    terms: Vec<Term>,
}

impl Symbol {
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::Unsupported(format!("dimension {dim}")));
        }
        for t in &terms {
            if t.holo[dim..].iter().chain(&t.anti[dim..]).any(|&e| e != 0) {
                return Err(Error::Parameter(format!("term exponents exceed dimension {dim}")));
            }
            if !t.radial_power.is_finite() || !t.coef.re.is_finite() || !t.coef.im.is_finite() {
                return Err(Error::Parameter("non-finite term data".into()));
            }
            for l in &t.logs {
                if let LogFactor::Pole { direction, .. } = l {
                    if direction.dim() != dim || direction.norm() > 1.0 + 1e-12 {
                        return Err(Error::Parameter(
                            "pole direction must be a vector of C^n with |b| ≤ 1".into(),
                        ));
                    }
                }
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self { dim, terms: vec![Term::monomial(c, &[], &[])] }
    }

    pub fn real_constant(dim: usize, c: f64) -> Self {
        Self::constant(dim, Complex64::new(c, 0.0))
    }

    /// `coef · z^holo · z̄^anti`.
    pub fn monomial(dim: usize, coef: Complex64, holo: &[u32], anti: &[u32]) -> Result<Self> {
        if holo.len() > dim || anti.len() > dim {
            return Err(Error::Parameter("multi-index longer than the dimension".into()));
        }
        Self::new(dim, vec![Term::monomial(coef, holo, anti)])
    }

    /// The coordinate function `z_i` (0-based).
    pub fn coordinate(dim: usize, i: usize) -> Result<Self> {
        let mut m = vec![0; dim];
        if i >= dim {
            return Err(Error::Parameter(format!("coordinate {i} in dimension {dim}")));
        }
        m[i] = 1;
        Self::monomial(dim, Complex64::new(1.0, 0.0), &m, &[])
    }

    /// `(1 − |z|²)^s`.
    pub fn defect_power(dim: usize, s: f64) -> Self {
        let mut t = Term::monomial(Complex64::new(1.0, 0.0), &[], &[]);
        t.radial_power = s;
        Self { dim, terms: vec![t] }
    }

    /// `log(1 / (1 − ⟨z, b⟩))`.
    pub fn log_pole(direction: Point) -> Result<Self> {
        let mut t = Term::monomial(Complex64::new(1.0, 0.0), &[], &[]);
        t.logs.push(LogFactor::Pole { direction, conjugate: false });
        Self::new(direction.dim(), vec![t])
    }

    /// `β(z, 0)`.
    pub fn hyperbolic_radius(dim: usize) -> Self {
        let mut t = Term::monomial(Complex64::new(1.0, 0.0), &[], &[]);
        t.logs.push(LogFactor::Hyperbolic);
        Self { dim, terms: vec![t] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, terms: self.terms.iter().map(Term::conj).collect() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coef *= c;
        }
        out
    }

    /// Holomorphic: no `z̄`, no radial factors, only unconjugated poles.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.iter().all(Term::is_holomorphic)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| {
            t.holo.iter().chain(&t.anti).all(|&e| e == 0) && t.radial_power == 0.0 && t.logs.is_empty()
        })
    }

    /// `Some((A, B))` with `self = A + conj(B)`, `A` and `B` holomorphic,
    /// when every term is holomorphic or antiholomorphic.
    pub fn pluriharmonic_split(&self) -> Option<(Symbol, Symbol)> {
        let mut holo = Vec::new();
        let mut anti = Vec::new();
        for t in &self.terms {
            if t.is_holomorphic() {
                holo.push(t.clone());
            } else if t.is_antiholomorphic() {
                anti.push(t.conj());
            } else {
                return None;
            }
        }
        Some((Symbol { dim: self.dim, terms: holo }, Symbol { dim: self.dim, terms: anti }))
    }

    /// No logarithmic factors: integrals against `dv_α` reduce to Beta moments.
    pub fn is_moment_class(&self) -> bool {
        self.terms.iter().all(|t| t.logs.is_empty())
    }

    pub fn eval(&self, z: &Point) -> Result<Complex64> {
        if z.dim() != self.dim {
            return Err(Error::Parameter(format!("symbol of dimension {} at {z:?}", self.dim)));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let defect = z.defect();
        for t in &self.terms {
            let mut v = t.coef * t.monomial_value(z);
            if t.radial_power != 0.0 {
                v *= defect.powf(t.radial_power);
            }
            for l in &t.logs {
                v *= log_value(l, z)?;
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Wirtinger gradient `(∂f/∂z_1, …, ∂f/∂z_n)`, term by term.
    pub fn gradient(&self, z: &Point) -> Result<Vec<Complex64>> {
        if z.dim() != self.dim {
            return Err(Error::Parameter(format!("symbol of dimension {} at {z:?}", self.dim)));
        }
        let n = self.dim;
        let defect = z.defect();
        let mut grad = vec![Complex64::new(0.0, 0.0); n];
        for t in &self.terms {
            let mono = t.monomial_value(z);
            let radial = if t.radial_power != 0.0 { defect.powf(t.radial_power) } else { 1.0 };
            let logs: Vec<Complex64> = t.logs.iter().map(|l| log_value(l, z)).collect::<Result<_>>()?;
            let log_prod: Complex64 = logs.iter().product();
            for (i, g) in grad.iter_mut().enumerate() {
                // monomial factor
                let d_mono = if t.holo[i] > 0 {
                    let mut h = t.holo;
                    h[i] -= 1;
                    let reduced = Term { holo: h, ..Term::monomial(Complex64::new(1.0, 0.0), &[], &[]) };
                    let mut red = reduced;
                    red.anti = t.anti;
                    red.monomial_value(z) * f64::from(t.holo[i])
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let d_radial = if t.radial_power != 0.0 {
                    -z.coord(i).conj() * (t.radial_power * defect.powf(t.radial_power - 1.0))
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let mut d_logs = Complex64::new(0.0, 0.0);
                for (j, l) in t.logs.iter().enumerate() {
                    let dl = log_derivative(l, z, i)?;
                    if dl != Complex64::new(0.0, 0.0) {
                        let others: Complex64 =
                            logs.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| *v).product();
                        d_logs += dl * others;
                    }
                }
                *g += t.coef
                    * (d_mono * radial * log_prod + mono * d_radial * log_prod + mono * radial * d_logs);
            }
        }
        Ok(grad)
    }

    /// Replaces every pole factor by its Taylor polynomial
    /// `Σ_{j=1}^{degree} ⟨z,b⟩^j / j` (conjugated for conjugate poles).
    pub fn expand_poles(&self, degree: u32) -> Symbol {
        let mut out: Vec<Term> = Vec::new();
        for t in &self.terms {
            let mut base = t.clone();
            let poles: Vec<LogFactor> = base
                .logs
                .iter()
                .filter(|l| matches!(l, LogFactor::Pole { .. }))
                .cloned()
                .collect();
            base.logs.retain(|l| !matches!(l, LogFactor::Pole { .. }));
            let mut partial = vec![base];
            for p in poles {
                let series = pole_series(self.dim, &p, degree);
                partial = partial.iter().flat_map(|a| series.iter().map(move |b| a.product(b))).collect();
            }
            out.extend(partial);
        }
        Symbol { dim: self.dim, terms: out }.simplified()
    }

    /// Merges terms with identical exponents and no log factors; drops zeros.
    pub fn simplified(&self) -> Symbol {
        let mut merged: BTreeMap<([u32; MAX_DIM], [u32; MAX_DIM], u64), Complex64> = BTreeMap::new();
        let mut rest = Vec::new();
        for t in &self.terms {
            if t.logs.is_empty() {
                *merged.entry((t.holo, t.anti, t.radial_power.to_bits())).or_default() += t.coef;
            } else {
                rest.push(t.clone());
            }
        }
        let mut terms: Vec<Term> = merged
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|((holo, anti, s), coef)| Term { coef, holo, anti, radial_power: f64::from_bits(s), logs: Vec::new() })
            .collect();
        terms.extend(rest);
        Symbol { dim: self.dim, terms }
    }

    /// Symbols addressed by id in configuration files.
    pub fn named(id: &str, dim: usize) -> Result<Symbol> {
        let one = Complex64::new(1.0, 0.0);
        let e1 = {
            let mut c = vec![Complex64::new(0.0, 0.0); dim];
            c[0] = one;
            Point::vector(&c)?
        };
        let z1 = Symbol::coordinate(dim, 0)?;
        let s = match id {
            "one" | "const" => Symbol::real_constant(dim, 1.0),
            "zero" => Symbol::zero(dim),
            "z" | "z1" => z1,
            "z2" => Symbol::coordinate(dim, 1)?,
            "z1z2" => Symbol::monomial(dim, one, &[1, 1], &[])?,
            "z_sq" => Symbol::monomial(dim, one, &[2], &[])?,
            "zbar" => z1.conj(),
            "zbar_sq" => Symbol::monomial(dim, one, &[], &[2])?,
            "re_z" => (&z1 + &z1.conj()).scale(Complex64::new(0.5, 0.0)),
            "abs_sq" => {
                let mut acc = Symbol::zero(dim);
                for i in 0..dim {
                    let c = Symbol::coordinate(dim, i)?;
                    acc = &acc + &(&c * &c.conj());
                }
                acc
            }
            "one_minus_abs_sq" => Symbol::defect_power(dim, 1.0),
            "log_pole" => Symbol::log_pole(e1)?,
            "log_pole_bar" => Symbol::log_pole(e1)?.conj(),
            "hyperbolic" => Symbol::hyperbolic_radius(dim),
            other => return Err(Error::Parameter(format!("unknown symbol id '{other}'"))),
        };
        Ok(s)
    }

    pub fn named_ids() -> &'static [&'static str] {
        &[
            "one", "zero", "z", "z1", "z2", "z1z2", "z_sq", "zbar", "zbar_sq", "re_z", "abs_sq",
            "one_minus_abs_sq", "log_pole", "log_pole_bar", "hyperbolic",
        ]
    }
}

fn pole_series(dim: usize, pole: &LogFactor, degree: u32) -> Vec<Term> {
    let LogFactor::Pole { direction, conjugate } = pole else {
        unreachable!("pole_series called on a non-pole factor")
    };
    let mut out = Vec::new();
    for j in 1..=degree {
        for l in multi_indices(dim, j) {
            // ⟨z,b⟩^j = Σ_{|l|=j} j!/l! z^l b̄^l
            let mut coef = Complex64::new(kernel_coefficient(1.0, &l[..dim]) / f64::from(j), 0.0);
            for i in 0..dim {
                coef *= direction.coord(i).conj().powu(l[i]);
            }
            let t = Term::monomial(coef, &l[..dim], &[]);
            out.push(if *conjugate { t.conj() } else { t });
        }
    }
    out
}

/// Multi-indices of length `dim` (padded to `MAX_DIM`) with total degree `total`.
pub fn multi_indices(dim: usize, total: u32) -> Vec<[u32; MAX_DIM]> {
    let mut out = Vec::new();
    match dim {
        1 => out.push([total, 0, 0]),
        2 => {
            for a in (0..=total).rev() {
                out.push([a, total - a, 0]);
            }
        }
        _ => {
            for a in (0..=total).rev() {
                for b in (0..=total - a).rev() {
                    out.push([a, b, total - a - b]);
                }
            }
        }
    }
    out
}

impl BallFunction for Symbol {
    fn eval(&self, z: &Point) -> Result<Complex64> {
        Symbol::eval(self, z)
    }
}

impl Add for &Symbol {
    type Output = Symbol;
    fn add(self, rhs: &Symbol) -> Symbol {
        assert_eq!(self.dim, rhs.dim, "adding symbols of different dimension");
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Symbol { dim: self.dim, terms }.simplified()
    }
}

impl Sub for &Symbol {
    type Output = Symbol;
    fn sub(self, rhs: &Symbol) -> Symbol {
        self + &(-rhs)
    }
}

impl Neg for &Symbol {
    type Output = Symbol;
    fn neg(self) -> Symbol {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Symbol {
    type Output = Symbol;
    fn mul(self, rhs: &Symbol) -> Symbol {
        assert_eq!(self.dim, rhs.dim, "multiplying symbols of different dimension");
        let terms = self.terms.iter().flat_map(|a| rhs.terms.iter().map(move |b| a.product(b))).collect();
        Symbol { dim: self.dim, terms }.simplified()
    }
}

// JSON term-list schema:
// {"n": 1, "terms": [{"coef": [re, im], "m": [..], "k": [..], "s": 0.0, "logs": [{"kind": "pole", "b": [[1, 0]], "conj": false}]}]}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum LogRepr {
    Radial,
    Pole { b: Point, conj: bool },
    Hyperbolic,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coef: [f64; 2],
    m: Vec<u32>,
    k: Vec<u32>,
    #[serde(default)]
    s: f64,
    #[serde(default)]
    logs: Vec<LogRepr>,
}

#[derive(Serialize, Deserialize)]
struct SymbolRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    terms: Vec<TermRepr>,
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for Symbol {
            type Output = Symbol;
            fn $f(self, rhs: Symbol) -> Symbol {
                (&self).$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Symbol {
    type Output = Symbol;
    fn neg(self) -> Symbol {
        -&self
    }
}

impl TryFrom<SymbolRepr> for Symbol {
    type Error = Error;
    fn try_from(r: SymbolRepr) -> Result<Self> {
        let dim = match (r.n, r.terms.first()) {
            (Some(n), _) => n,
            (None, Some(t)) => t.m.len(),
            (None, None) => return Err(Error::Parameter("empty symbol needs an explicit 'n'".into())),
        };
        let mut terms = Vec::new();
        for t in r.terms {
            if t.m.len() != dim || t.k.len() != dim {
                return Err(Error::Parameter(format!("term multi-indices must have length {dim}")));
            }
            let mut term = Term::monomial(Complex64::new(t.coef[0], t.coef[1]), &t.m, &t.k);
            term.radial_power = t.s;
            term.logs = t
                .logs
                .into_iter()
                .map(|l| match l {
                    LogRepr::Radial => LogFactor::Radial,
                    LogRepr::Pole { b, conj } => LogFactor::Pole { direction: b, conjugate: conj },
                    LogRepr::Hyperbolic => LogFactor::Hyperbolic,
                })
                .collect();
            terms.push(term);
        }
        Symbol::new(dim, terms)
    }
}

impl From<Symbol> for SymbolRepr {
    fn from(s: Symbol) -> Self {
        let dim = s.dim;
        SymbolRepr {
            n: Some(dim),
            terms: s
                .terms
                .into_iter()
                .map(|t| TermRepr {
                    coef: [t.coef.re, t.coef.im],
                    m: t.holo[..dim].to_vec(),
                    k: t.anti[..dim].to_vec(),
                    s: t.radial_power,
                    logs: t
                        .logs
                        .into_iter()
                        .map(|l| match l {
                            LogFactor::Radial => LogRepr::Radial,
                            LogFactor::Pole { direction, conjugate } => LogRepr::Pole { b: direction, conj: conjugate },
                            LogFactor::Hyperbolic => LogRepr::Hyperbolic,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sampling::uniform_ball;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `∂f/∂z_i = (∂_x − i ∂_y)/2` by central differences.
    pub(crate) fn wirtinger_fd(f: &Symbol, z: &Point, h: f64) -> Vec<Complex64> {
        (0..z.dim())
            .map(|i| {
                let shift = |d: Complex64| {
                    let mut v = z.coords().to_vec();
                    v[i] += d;
                    f.eval(&Point::new(&v).unwrap()).unwrap()
                };
                let dx = (shift(c(h, 0.0)) - shift(c(-h, 0.0))) / (2.0 * h);
                let dy = (shift(c(0.0, h)) - shift(c(0.0, -h))) / (2.0 * h);
                (dx - c(0.0, 1.0) * dy) * 0.5
            })
            .collect()
    }

    fn mixed(n: usize) -> Symbol {
        let b = Point::new(&vec![c(0.6, 0.0); n].iter().enumerate().map(|(i, v)| if i == 0 { *v } else { c(0.0, 0.5) }).collect::<Vec<_>>()).unwrap();
        let mut t = Term::monomial(c(0.7, -0.2), &[1], &[0]);
        t.radial_power = 0.5;
        t.logs = vec![LogFactor::Radial, LogFactor::Pole { direction: b, conjugate: true }];
        let weird = Symbol::new(n, vec![t]).unwrap();
        let mut acc = &weird + &Symbol::named("hyperbolic", n).unwrap();
        acc = &acc + &Symbol::log_pole(b).unwrap();
        &acc * &Symbol::named("re_z", n).unwrap()
    }

    #[test]
    fn gradients_match_finite_differences() {
        for n in 1..=3 {
            let symbols = vec![
                Symbol::named("z1", n).unwrap(),
                Symbol::named("zbar_sq", n).unwrap(),
                Symbol::named("abs_sq", n).unwrap(),
                Symbol::named("one_minus_abs_sq", n).unwrap(),
                Symbol::named("log_pole", n).unwrap(),
                Symbol::named("log_pole_bar", n).unwrap(),
                Symbol::named("hyperbolic", n).unwrap(),
                mixed(n),
            ];
            for f in &symbols {
                for z in uniform_ball(n, 0.9, 100, 17 + n as u64) {
                    if z.norm() < 1e-3 {
                        continue;
                    }
                    let exact = f.gradient(&z).unwrap();
                    let fd = wirtinger_fd(f, &z, 1e-6);
                    for (a, b) in exact.iter().zip(&fd) {
                        let scale = a.norm().max(1e-2);
                        assert!((a - b).norm() < 1e-6 * scale.max(1.0) * 10.0, "{f:?} at {z:?}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_is_pointwise() {
        let f = mixed(2);
        for z in uniform_ball(2, 0.9, 20, 3) {
            assert!((f.conj().eval(&z).unwrap() - f.eval(&z).unwrap().conj()).norm() < 1e-14);
        }
        assert_eq!(f.conj().conj(), f);
    }

    #[test]
    fn pole_expansion_converges_inside() {
        let b = Point::vector(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let f = Symbol::log_pole(b).unwrap();
        let g = f.conj().expand_poles(200);
        assert!(g.is_moment_class());
        let z = Point::new(&[c(0.3, 0.2), c(-0.1, 0.4)]).unwrap();
        assert!((g.eval(&z).unwrap() - f.conj().eval(&z).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn pole_guard() {
        let f = Symbol::named("log_pole", 1).unwrap();
        assert!(f.eval(&Point::real(&[0.999_999]).unwrap()).is_ok());
        let near = Point::real(&[1.0 - 1e-13]).unwrap();
        assert!(matches!(f.eval(&near), Err(Error::Evaluation(_))));
        assert!(matches!(f.gradient(&near), Err(Error::Evaluation(_))));
    }

    #[test]
    fn pluriharmonic_split() {
        let f = Symbol::named("re_z", 1).unwrap();
        let (a, b) = f.pluriharmonic_split().unwrap();
        let z = Point::new(&[c(0.3, 0.4)]).unwrap();
        assert!((a.eval(&z).unwrap() + b.eval(&z).unwrap().conj() - f.eval(&z).unwrap()).norm() < 1e-15);
        assert!(Symbol::named("abs_sq", 1).unwrap().pluriharmonic_split().is_none());
    }

    #[test]
    fn json_round_trip() {
        let f = mixed(2);
        let text = serde_json::to_string(&f).unwrap();
        let back: Symbol = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let parsed: Symbol =
            serde_json::from_str(r#"{"terms":[{"coef":[1,0],"m":[1],"k":[0]},{"coef":[0,2],"m":[0],"k":[1],"s":1.5}]}"#)
                .unwrap();
        assert_eq!(parsed.dim(), 1);
        assert!(serde_json::from_str::<Symbol>(r#"{"terms":[{"coef":[1,0],"m":[1],"k":[0,1]}]}"#).is_err());
    }

    #[test]
    fn named_registry_is_complete() {
        for id in Symbol::named_ids() {
            let n = if id.contains('2') { 2 } else { 1 };
            assert!(Symbol::named(id, n).is_ok(), "{id}");
        }
        assert!(Symbol::named("nope", 1).is_err());
    }
}
