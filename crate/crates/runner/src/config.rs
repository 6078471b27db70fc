use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use bergman_lab::quadrature::{ExponentPair, RuleSpec};
use bergman_lab::symbols::Symbol;
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, ConfigResult};

/// Registered experiments, one per acceptance criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExperimentId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
    E9,
    E10,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        Self::E1,
        Self::E2,
        Self::E3,
        Self::E4,
        Self::E5,
        Self::E6,
        Self::E7,
        Self::E8,
        Self::E9,
        Self::E10,
    ];

    pub fn description(self) -> &'static str {
        match self {
            Self::E1 => "geometry identities: Möbius involution, defect identity, metric invariance, geodesic midpoint",
            Self::E2 => "lattice certification: separation, sampled covering, dilated-ball multiplicity",
            Self::E3 => "quadrature against closed-form monomial moments and weight constants",
            Self::E4 => "reproducing and projection identities, Berezin transform of 1",
            Self::E5 => "Forelli-Rudin and separated-sum boundedness probes",
            Self::E6 => "exact truncated Hankel matrices: closed form and the gamma < 0 growth regime",
            Self::E7 => "Hankel top singular value against the Bloch norm",
            Self::E8 => "compactness decay of Hankel probes along boundary directions",
            Self::E9 => "BMO decomposition and VMO decay profiles",
            Self::E10 => "tangential maximum principle and the invariant-gradient identity",
        }
    }

    /// Whether the experiment feeds `(p, q, alpha, beta)` to Hankel operators.
    fn uses_hankel(self) -> bool {
        matches!(self, Self::E6 | Self::E7 | Self::E8)
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ExperimentId {
    type Err = ConfigError;
    fn from_str(s: &str) -> ConfigResult<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConfigError::UnknownExperiment(s.to_string()))
    }
}

/// A fully populated run configuration. Fields an experiment does not read
/// keep their generic defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_id: ExperimentId,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub gamma: f64,
    /// Metric-ball / lattice radius.
    pub r: f64,
    /// Extra weights (E3 moment weights, E4 projection weights, E6 configurations).
    pub alphas: Vec<f64>,
    /// Euclidean radii: probe radii, sampling regions or lattice radii.
    pub radii: Vec<f64>,
    pub max_modulus: f64,
    pub symbols: Vec<String>,
    pub truncation: u32,
    pub samples: usize,
    /// One rule per entry of `dims`, or a single rule shared by all.
    pub quadrature: Vec<RuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment_id: String,
    seed: Option<u64>,
    dims: Option<Vec<usize>>,
    p: Option<f64>,
    q: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    sigma: Option<f64>,
    gamma: Option<f64>,
    r: Option<f64>,
    alphas: Option<Vec<f64>>,
    radii: Option<Vec<f64>>,
    max_modulus: Option<f64>,
    symbols: Option<Vec<String>>,
    truncation: Option<u32>,
    samples: Option<usize>,
    quadrature: Option<Vec<RuleSpec>>,
    output_dir: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;

fn tensor(radial: usize, angular: usize) -> RuleSpec {
    RuleSpec::Tensor { radial, angular }
}

impl ExperimentConfig {
    /// Defaults for one experiment.
    pub fn defaults(id: ExperimentId) -> Self {
        let mut c = Self {
            experiment_id: id,
            seed: DEFAULT_SEED,
            dims: vec![1],
            p: 2.0,
            q: 2.0,
            alpha: 0.0,
            beta: 0.0,
            sigma: 0.0,
            gamma: 0.0,
            r: 0.3,
            alphas: vec![],
            radii: vec![],
            max_modulus: 0.99,
            symbols: vec![],
            truncation: 40,
            samples: 0,
            quadrature: vec![tensor(32, 128)],
            output_dir: None,
        };
        let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match id {
            ExperimentId::E1 => {
                c.dims = vec![1, 2, 3];
                c.samples = 1000;
            }
            ExperimentId::E2 => {
                c.radii = vec![0.3, 0.5];
                c.samples = 10_000;
            }
            ExperimentId::E3 => {
                c.dims = vec![1, 2];
                c.alphas = vec![0.0, 1.0, 2.5];
                c.truncation = 20;
                c.quadrature = vec![tensor(48, 48), tensor(32, 24)];
            }
            ExperimentId::E4 => {
                c.dims = vec![1, 2];
                c.alphas = vec![0.0, 1.0, 3.0];
                c.truncation = 8;
                c.samples = 100;
                c.radii = vec![0.9, 0.7, 0.95];
                c.quadrature = vec![tensor(32, 256), tensor(16, 48)];
            }
            ExperimentId::E5 => {
                c.r = 0.5;
                c.radii = vec![0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.97, 0.99];
                c.quadrature = vec![tensor(64, 2048)];
            }
            ExperimentId::E6 => {
                c.alphas = vec![0.0, 6.0];
            }
            ExperimentId::E7 => {
                c.symbols = strs(&["z", "z_sq", "log_pole"]);
            }
            ExperimentId::E8 => {
                c.symbols = strs(&["zbar", "log_pole_bar"]);
                c.radii = vec![0.5, 0.7, 0.9, 0.95, 0.99];
                c.quadrature = vec![tensor(64, 256)];
            }
            ExperimentId::E9 => {
                c.symbols = strs(&["hyperbolic", "re_z", "one_minus_abs_sq"]);
                c.quadrature = vec![tensor(12, 24)];
            }
            ExperimentId::E10 => {
                c.dims = vec![2];
                c.symbols = strs(&["z1", "z1z2", "one"]);
                c.radii = vec![0.6, 0.99];
            }
        }
        c
    }

    /// Parses and validates TOML text, filling defaults for absent keys.
    pub fn parse(text: &str) -> ConfigResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let id: ExperimentId = raw.experiment_id.parse()?;
        let mut c = Self::defaults(id);
        macro_rules! fill {
            ($($f:ident),*) => { $( if let Some(v) = raw.$f { c.$f = v; } )* };
        }
        fill!(seed, dims, p, q, alpha, beta, sigma, gamma, r, alphas, radii, max_modulus, symbols, truncation, samples, quadrature);
        c.output_dir = raw.output_dir;
        c.validate()?;
        Ok(c)
    }

    /// TOML echo; `parse(serialize(c)) == c`.
    pub fn serialize(&self) -> ConfigResult<String> {
        toml::to_string(self).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn validate(&self) -> ConfigResult<()> {
        let bad = |m: String| Err(ConfigError::Hypothesis(m));
        if self.dims.is_empty() || self.dims.iter().any(|n| !(1..=3).contains(n)) {
            return bad(format!("dims must be drawn from {{1, 2, 3}} (got {:?})", self.dims));
        }
        if !(self.alpha > -1.0) {
            return bad("alpha must exceed -1".into());
        }
        if !(self.beta > -1.0) {
            return bad("beta must exceed -1".into());
        }
        if self.alphas.iter().any(|a| !(*a > -1.0)) {
            return bad("alpha must exceed -1 (entry of alphas)".into());
        }
        if !(self.sigma > -1.0 + self.gamma * self.p) {
            return bad("requires sigma > -1+gamma*p".into());
        }
        if !(self.r > 0.0 && self.r < 1.0) || self.radii.iter().any(|x| !(0.0..1.0).contains(x)) {
            return bad("radii must lie in [0, 1) and r in (0, 1)".into());
        }
        if !(self.max_modulus > 0.0 && self.max_modulus < 1.0) {
            return bad("max_modulus must lie in (0, 1)".into());
        }
        if self.quadrature.is_empty() || (self.quadrature.len() != 1 && self.quadrature.len() != self.dims.len()) {
            return bad("quadrature needs one rule, or one per entry of dims".into());
        }
        for (i, &n) in self.dims.iter().enumerate() {
            if n == 3 && matches!(self.rule_spec(i), RuleSpec::Tensor { .. }) && self.experiment_id != ExperimentId::E1 {
                return bad("tensor rules stop at n = 2; use monte_carlo for n = 3".into());
            }
        }
        for s in &self.symbols {
            for &n in &self.dims {
                if Symbol::named(s, n).is_err() {
                    return bad(format!("unknown symbol id {s:?} in dimension {n}"));
                }
            }
        }
        if self.experiment_id.uses_hankel() {
            for &n in &self.dims {
                for alpha in std::iter::once(self.alpha).chain(self.alphas.iter().copied()) {
                    ExponentPair { n, p: self.p, q: self.q, alpha, beta: self.beta }
                        .validate()
                        .map_err(|e| ConfigError::Hypothesis(e.to_string()))?;
                }
            }
            if matches!(self.experiment_id, ExperimentId::E6 | ExperimentId::E7) && (self.p != 2.0 || self.q != 2.0) {
                return bad("truncated matrices need p = q = 2".into());
            }
        }
        match self.experiment_id {
            ExperimentId::E6 if self.alphas.len() != 2 => bad("E6 takes alphas = [exactness alpha, growth alpha]".into()),
            ExperimentId::E4 if self.radii.len() != self.dims.len() + 1 => {
                bad("E4 takes one sampling radius per dimension plus the Berezin radius".into())
            }
            ExperimentId::E10 if !self.dims.contains(&2) && !self.dims.contains(&3) => {
                bad("E10 needs a dimension n >= 2".into())
            }
            _ if self.truncation > 200 => bad("truncation above 200 exceeds the matrix cap".into()),
            _ => Ok(()),
        }
    }

    /// Rule for the `i`-th entry of `dims`.
    pub fn rule_spec(&self, i: usize) -> RuleSpec {
        *self.quadrature.get(i).unwrap_or(&self.quadrature[0])
    }
}
