use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::branching::{SpectralTolerances, DEFAULT_BUDGET, DEFAULT_X_CAP};
use crate::error::{Error, Result};
use crate::markov::{EvalConfig, Method, ModifiedParams};
use crate::models::{PauliAxis, SpinChainParams};
use crate::numkernel::COND_MAX;
use crate::propagate::{DEFAULT_N_STEPS, DEFAULT_N_T};

/// Environment variable overriding `workers`.
pub const WORKERS_ENV: &str = "UNWIND_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    /// Driven chain with the quantum-optical dissipator.
    SpinChain(ChainModel),
    /// `λ·exp(tℒ₁) + (1−λ)·exp(tℒ₂)` over an observation time `period`.
    Mixture(MixtureModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    pub sites: usize,
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub w: f64,
    #[serde(rename = "E", default)]
    pub e: f64,
    pub omega: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "one")]
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureModel {
    pub sites: usize,
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub w: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub period: f64,
    #[serde(default = "default_axes")]
    pub axes: (PauliAxis, PauliAxis),
}

fn one() -> f64 {
    1.0
}

fn default_axes() -> (PauliAxis, PauliAxis) {
    (PauliAxis::X, PauliAxis::Y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisName {
    E,
    #[serde(rename = "omega")]
    Omega,
    #[serde(rename = "w")]
    W,
    #[serde(rename = "inv_T")]
    InvT,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "lambda")]
    Lambda,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::E => "E",
            AxisName::Omega => "omega",
            AxisName::W => "w",
            AxisName::InvT => "inv_T",
            AxisName::Gamma => "gamma",
            AxisName::Lambda => "lambda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodsConfig {
    pub list: Vec<Method>,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_n_b")]
    pub n_b: usize,
    #[serde(default = "one_u32")]
    pub radius: u32,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_eta() -> f64 {
    0.7
}
fn default_n_b() -> usize {
    2
}
fn one_u32() -> u32 {
    1
}
fn default_budget() -> u64 {
    DEFAULT_BUDGET as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    pub n_steps: usize,
    pub n_t: usize,
    pub tol_ccp: Option<f64>,
    pub tol_pair: f64,
    pub cond_max: f64,
    pub x_cap: i64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            n_steps: DEFAULT_N_STEPS,
            n_t: DEFAULT_N_T,
            tol_ccp: None,
            tol_pair: SpectralTolerances::default().tol_pair,
            cond_max: COND_MAX,
            x_cap: DEFAULT_X_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    /// Fill the `seconds` column; off gives byte-identical data sections.
    #[serde(default = "yes")]
    pub timing: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportConfig {
    /// `η` values for which the per-pair `z_c` table is reported.
    pub etas: Vec<f64>,
    /// Lowest-μ candidates listed per method.
    pub keep: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { etas: vec![0.9, 0.7, 0.5], keep: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: ModelConfig,
    pub axis1: Axis,
    pub axis2: Axis,
    pub methods: MethodsConfig,
    #[serde(default)]
    pub numerics: Numerics,
    pub output: OutputConfig,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub report: ReportConfig,
}

/// Concrete model at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum PointModel {
    Chain(SpinChainParams),
    Mixture(MixtureModel),
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates; relative output paths are resolved against the
    /// config file's directory.
    pub fn load(path: &Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)?;
        if cfg.output.path.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.output.path = dir.join(&cfg.output.path);
            }
        }
        Ok((cfg, text))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        for (label, axis) in [("axis1", &self.axis1), ("axis2", &self.axis2)] {
            if axis.count == 0 {
                return bad(format!("{label}: count must be at least 1"));
            }
            if !(axis.min.is_finite() && axis.max.is_finite()) {
                return bad(format!("{label}: bounds must be finite"));
            }
            if axis.count > 1 && !(axis.min < axis.max) {
                return bad(format!("{label}: min must be below max"));
            }
            if axis.count == 1 && axis.min > axis.max {
                return bad(format!("{label}: min exceeds max"));
            }
            let allowed = match self.model {
                ModelConfig::SpinChain(_) => !matches!(axis.name, AxisName::Lambda),
                ModelConfig::Mixture(_) => !matches!(axis.name, AxisName::E | AxisName::Omega),
            };
            if !allowed {
                return bad(format!("{label}: axis {} does not apply to this model", axis.name.as_str()));
            }
        }
        if self.axis1.name == self.axis2.name {
            return bad("axis1 and axis2 must differ".into());
        }
        if self.methods.list.is_empty() {
            return bad("method list is empty".into());
        }
        if !(0.0..=1.0).contains(&self.methods.eta) {
            return bad(format!("eta {} outside [0, 1]", self.methods.eta));
        }
        let n = &self.numerics;
        if n.n_t == 0 || n.n_steps == 0 || !n.n_steps.is_multiple_of(n.n_t) {
            return bad(format!("n_steps {} must be a positive multiple of n_t {}", n.n_steps, n.n_t));
        }
        if !(n.tol_pair > 0.0 && n.cond_max > 0.0 && n.x_cap >= 0) {
            return bad("numerical tolerances must be positive".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if self.report.etas.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return bad("report etas must lie in [0, 1]".into());
        }
        // Every grid point must describe a valid model.
        for &(i, j) in &[(0, 0), (self.axis1.count - 1, self.axis2.count - 1)] {
            self.point_model(i, j)?;
        }
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.axis1.count, self.axis2.count)
    }

    pub fn workers(&self) -> usize {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&n: &usize| n > 0)
            .or(self.workers)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn eval_config(&self) -> EvalConfig {
        let has = |m| self.methods.list.contains(&m);
        EvalConfig {
            principal: has(Method::Principal),
            unwound: has(Method::Unwound),
            modified: has(Method::Modified).then_some(ModifiedParams { eta: self.methods.eta, n_b: self.methods.n_b }),
            standard: has(Method::Standard).then_some(self.methods.radius),
            budget: self.methods.budget as u128,
            tol_ccp: self.numerics.tol_ccp,
            spectral: SpectralTolerances {
                tol_pair: self.numerics.tol_pair,
                cond_max: self.numerics.cond_max,
                ..SpectralTolerances::default()
            },
            x_cap: self.numerics.x_cap,
            keep: 0,
        }
    }

    pub fn point_model(&self, i: usize, j: usize) -> Result<PointModel> {
        let (n1, n2) = self.shape();
        if i >= n1 || j >= n2 {
            return Err(Error::IndexOutOfRange { i, j, n1, n2 });
        }
        let assignments = [(self.axis1.name, self.axis1.value(i)), (self.axis2.name, self.axis2.value(j))];
        match &self.model {
            ModelConfig::SpinChain(m) => {
                let mut p = SpinChainParams {
                    sites: m.sites,
                    deltas: m.deltas.clone(),
                    w: m.w,
                    e: m.e,
                    omega: m.omega,
                    gamma: m.gamma,
                    temperature: m.temperature,
                };
                for (name, v) in assignments {
                    match name {
                        AxisName::E => p.e = v,
                        AxisName::Omega => p.omega = v,
                        AxisName::W => p.w = v,
                        AxisName::InvT => p.omega = 2.0 * std::f64::consts::PI * v,
                        AxisName::Gamma => p.gamma = v,
                        AxisName::Lambda => unreachable!("rejected by validate"),
                    }
                }
                p.validate()?;
                if !(p.omega > 0.0) {
                    return Err(Error::ConfigInvalid(format!("drive frequency {} must be positive", p.omega)));
                }
                Ok(PointModel::Chain(p))
            }
            ModelConfig::Mixture(m) => {
                let mut p = m.clone();
                for (name, v) in assignments {
                    match name {
                        AxisName::W => p.w = v,
                        AxisName::InvT => p.period = 1.0 / v,
                        AxisName::Gamma => p.gamma = v,
                        AxisName::Lambda => p.lambda = v,
                        AxisName::E | AxisName::Omega => unreachable!("rejected by validate"),
                    }
                }
                if !(0.0..=1.0).contains(&p.lambda) {
                    return Err(Error::ConfigInvalid(format!("lambda {} outside [0, 1]", p.lambda)));
                }
                if !(p.period > 0.0 && p.period.is_finite()) {
                    return Err(Error::ConfigInvalid(format!("observation time {} must be positive", p.period)));
                }
                if p.sites == 0 || p.deltas.len() != p.sites {
                    return Err(Error::ConfigInvalid("deltas must have one entry per site".into()));
                }
                Ok(PointModel::Mixture(p))
            }
        }
    }
}
