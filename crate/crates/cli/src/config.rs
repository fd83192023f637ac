//! Run configuration: TOML sections, command-line overrides and conversion to
//! library types.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use spdp::tomo::{parse_angles, Constraint, CtModelSpec, Geometry, Method, NoiseModel, TvKind};
use spdp::{StepPolicy, StopRule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub model: ModelConfig,
    pub solver: SolverConfig,
    pub noise: NoiseConfig,
    pub io: IoConfig,
}

/// `"start:step:stop"` with inclusive stop, or an explicit list in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angles {
    Range(String),
    List(Vec<f64>),
}

impl Angles {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        match self {
            Angles::Range(s) => Ok(parse_angles(s)?),
            Angles::List(v) if v.is_empty() => bail!("angle list is empty"),
            Angles::List(v) => Ok(v.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub n: usize,
    pub angles: Angles,
    /// Rays per angle; `round(sqrt(2) n)` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            n: 256,
            angles: Angles::Range("0:10:179".into()),
            p: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TvChoice {
    Atv,
    Itv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintChoice {
    None,
    Nonneg,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum MethodChoice {
    #[serde(rename = "I")]
    #[value(name = "I", alias = "1")]
    I,
    #[serde(rename = "II")]
    #[value(name = "II", alias = "2")]
    II,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub w1: f64,
    pub w2: f64,
    pub lambda: f64,
    pub tv: TvChoice,
    pub constraint: ConstraintChoice,
    /// Box bounds, used when `constraint = "box"`.
    pub lo: f64,
    pub hi: f64,
    pub method: MethodChoice,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            w1: 0.1,
            w2: 0.9,
            lambda: 0.8,
            tv: TvChoice::Atv,
            constraint: ConstraintChoice::Box,
            lo: 0.0,
            hi: 1.0,
            method: MethodChoice::II,
        }
    }
}

impl ModelConfig {
    pub fn spec(&self) -> Result<CtModelSpec> {
        let spec = CtModelSpec {
            w1: self.w1,
            w2: self.w2,
            lambda: self.lambda,
            tv: match self.tv {
                TvChoice::Atv => TvKind::Atv,
                TvChoice::Itv => TvKind::Itv,
            },
            constraint: match self.constraint {
                ConstraintChoice::None => Constraint::None,
                ConstraintChoice::Nonneg => Constraint::Nonneg,
                ConstraintChoice::Box => Constraint::Box {
                    lo: self.lo,
                    hi: self.hi,
                },
            },
            method: match self.method {
                MethodChoice::I => Method::MethodI,
                MethodChoice::II => Method::MethodII,
            },
        };
        spec.validate().context("invalid [model] section")?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyChoice {
    Fixed,
    AutoFixed,
    Preconditioned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub policy: PolicyChoice,
    /// Preconditioner exponent in `[0, 2]`.
    pub alpha: f64,
    /// Required for `policy = "fixed"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub theta: f64,
    pub epsilon: f64,
    pub max_iter: usize,
    pub log_every: usize,
    /// Seed of the power iteration behind fixed steps.
    pub power_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            policy: PolicyChoice::Preconditioned,
            alpha: 1.0,
            tau: None,
            sigma: None,
            theta: 1.0,
            epsilon: 1e-4,
            max_iter: 40_000,
            log_every: 50,
            power_seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn stop_rule(&self) -> Result<StopRule> {
        StopRule::new(self.epsilon, self.max_iter).context("invalid [solver] section")
    }

    /// Policy for `problem`; `auto-fixed` runs a power iteration.
    pub fn policy(&self, problem: &spdp::Problem) -> Result<StepPolicy> {
        let policy = match self.policy {
            PolicyChoice::Fixed => match (self.tau, self.sigma) {
                (Some(tau), Some(sigma)) => StepPolicy::fixed(tau, sigma),
                _ => bail!("solver.policy = \"fixed\" requires solver.tau and solver.sigma"),
            },
            PolicyChoice::AutoFixed => StepPolicy::auto_fixed(problem, self.power_seed)?,
            PolicyChoice::Preconditioned => StepPolicy::preconditioned(self.alpha),
        };
        Ok(policy.with_theta(self.theta))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Absolute Gaussian level; `0.01 mean|b|` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaussian_sigma: Option<f64>,
    pub impulse_fraction: f64,
    pub impulse_scale: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            gaussian_sigma: None,
            impulse_fraction: spdp::tomo::DEFAULT_IMPULSE_FRACTION,
            impulse_scale: 1.0,
            seed: 42,
        }
    }
}

impl NoiseConfig {
    pub fn model(&self, b: &[f64]) -> NoiseModel {
        let base = NoiseModel::default_for(b);
        NoiseModel {
            gaussian_sigma: self.gaussian_sigma.unwrap_or(base.gaussian_sigma),
            impulse_fraction: self.impulse_fraction,
            impulse_scale: self.impulse_scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct IoConfig {
    /// Problem bundle written by `simulate`; `solve` simulates in memory when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bundle: Option<PathBuf>,
    /// Report `log10` of the energy ratio instead of decibels.
    pub snr_literal: bool,
}

impl GeometryConfig {
    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::new(self.n, self.angles.resolve()?, self.p).context("invalid [geometry] section")
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).context("malformed TOML")?;
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            anyhow::anyhow!("config field `{path}`: {}", e.into_inner().message().trim())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}
