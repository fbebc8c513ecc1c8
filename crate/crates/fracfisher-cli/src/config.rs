//! Experiment configuration: a flat TOML document whose keys mirror the
//! command-line flags. Every key is optional; missing keys take the reference
//! defaults (λ = 1.5 on the `N = 2^16`, `x_max = 200` grid).

use std::path::PathBuf;

use fracfisher::clt::{BaseLaw, Kernel, MAX_SWEEP_N, MIN_MC_SAMPLES};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("`{key}` out of range: {constraint}")]
    Range { key: &'static str, constraint: String },

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Stable density and its eigen-relation.
    Stable,
    /// Linnik density by inversion and by the mixture integral.
    Linnik,
    /// Relative fractional Fisher information of one law.
    Fisher,
    /// I_λ(T_n) along normalized sums, with the step and global bounds.
    CltSweep,
    /// The Blachman–Stam type inequality over all pairs of three laws.
    BsCheck,
    /// The fractional heat semigroup applied to one law.
    Diffuse,
    /// The fractional relative entropy and its bound.
    Entropy,
    /// The finiteness certificate for the Linnik law and attraction diagnostics.
    VerifyAppendix,
    /// Monte Carlo variance drop of a U-statistic.
    Udrop,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Stable => "stable",
            Command::Linnik => "linnik",
            Command::Fisher => "fisher",
            Command::CltSweep => "clt-sweep",
            Command::BsCheck => "bs-check",
            Command::Diffuse => "diffuse",
            Command::Entropy => "entropy",
            Command::VerifyAppendix => "verify-appendix",
            Command::Udrop => "udrop",
        }
    }

    /// The law a command acts on when the config does not name one.
    fn default_law(self) -> Law {
        match self {
            Command::Stable | Command::Fisher => Law::Stable,
            _ => Law::Linnik,
        }
    }
}

/// Input laws for the commands that act on a density.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Stable,
    Linnik,
    Gaussian,
    Laplace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Defaults to `stable` for `stable`/`fisher` and `linnik` otherwise.
    pub law: Option<Law>,
    pub lambda: f64,
    pub n_points: usize,
    pub x_max: f64,
    pub n_max: usize,
    /// Smoothing parameter for `bs-check` and `clt-sweep`.
    pub epsilon: f64,
    pub delta: f64,
    pub upsilon: f64,
    /// Variance of the `gaussian` law.
    pub variance: f64,
    /// Diffusion time for `diffuse`.
    pub t: f64,
    /// Semigroup exponent for `diffuse`; defaults to λ/2.
    pub alpha: Option<f64>,
    pub t_max: f64,
    pub nodes: usize,
    pub m: usize,
    pub n: usize,
    pub samples: usize,
    pub kernel: Kernel,
    pub base_law: BaseLaw,
    pub seed: u64,
    #[serde(skip_serializing)]
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: Command::Fisher,
            law: None,
            lambda: 1.5,
            n_points: 1 << 16,
            x_max: 200.0,
            n_max: 8,
            epsilon: 0.3,
            delta: 0.5,
            upsilon: 1.0,
            variance: 1.0,
            t: 1.0,
            alpha: None,
            t_max: fracfisher::entropy::DEFAULT_T_MAX,
            nodes: fracfisher::entropy::DEFAULT_NODES,
            m: 1,
            n: 4,
            samples: 100_000,
            kernel: Kernel::Linear,
            base_law: BaseLaw::Gaussian,
            seed: 20_240_917,
            output_dir: PathBuf::from("fracfisher-out"),
        }
    }
}

fn check(key: &'static str, ok: bool, constraint: impl FnOnce() -> String) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Range {
            key,
            constraint: constraint(),
        })
    }
}

fn unit_open(key: &'static str, v: f64) -> Result<(), ConfigError> {
    check(key, v > 0.0 && v < 1.0, || format!("must lie in (0, 1), got {v}"))
}

impl ExperimentConfig {
    pub fn law(&self) -> Law {
        self.law.unwrap_or(self.command.default_law())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(0.5 * self.lambda)
    }

    /// Fills the optional fields so that the report echoes what actually ran.
    pub fn resolved(mut self) -> Self {
        self.law = Some(self.law());
        self.alpha = Some(self.alpha());
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let l = self.lambda;
        check("lambda", l > 1.0 && l <= 2.0, || {
            format!("must satisfy 1 < lambda ≤ 2, got {l}")
        })?;
        if matches!(self.command, Command::Entropy | Command::VerifyAppendix) {
            check("lambda", l < 2.0, || {
                format!("{} needs 1 < lambda < 2, got {l}", self.command.name())
            })?;
        }
        let n = self.n_points;
        check("n_points", n.is_power_of_two() && n >= 16, || {
            format!("must be a power of two ≥ 16, got {n}")
        })?;
        check("x_max", self.x_max > 0.0 && self.x_max.is_finite(), || {
            format!("must be positive, got {}", self.x_max)
        })?;
        check("n_max", (1..=MAX_SWEEP_N).contains(&self.n_max), || {
            format!("must lie in 1..={MAX_SWEEP_N}, got {}", self.n_max)
        })?;
        unit_open("epsilon", self.epsilon)?;
        unit_open("delta", self.delta)?;
        check("upsilon", self.upsilon > 0.0 && self.upsilon.is_finite(), || {
            format!("must be positive, got {}", self.upsilon)
        })?;
        check("variance", self.variance > 0.0 && self.variance.is_finite(), || {
            format!("must be positive, got {}", self.variance)
        })?;
        check("t", self.t >= 0.0 && self.t.is_finite(), || {
            format!("must be nonnegative, got {}", self.t)
        })?;
        let a = self.alpha();
        check("alpha", a > 0.5 && a <= 1.0, || {
            format!("must satisfy 1/2 < alpha ≤ 1, got {a}")
        })?;
        check("t_max", self.t_max > 0.0 && self.t_max.is_finite(), || {
            format!("must be positive, got {}", self.t_max)
        })?;
        check("nodes", self.nodes >= 3, || {
            format!("must be at least 3, got {}", self.nodes)
        })?;
        check("n", (1..=8).contains(&self.n), || {
            format!("must lie in 1..=8, got {}", self.n)
        })?;
        check("m", self.m >= 1 && self.m <= self.n, || {
            format!("must satisfy 1 ≤ m ≤ n = {}, got {}", self.n, self.m)
        })?;
        check("samples", self.samples >= MIN_MC_SAMPLES, || {
            format!("must be at least {MIN_MC_SAMPLES}, got {}", self.samples)
        })?;
        Ok(())
    }
}

/// Parses and validates a config document; an empty document gives the defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let config: ExperimentConfig = toml::from_str(text)?;
    config.validate()?;
    Ok(config)
}

pub fn read_config(path: &std::path::Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text)
}
