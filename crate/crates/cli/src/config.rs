//! Flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; blank lines and lines starting with `#` are
//! ignored. Later assignments win, so command-line overrides are applied by
//! feeding them through [`ExperimentConfig::set`] after the file.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, ensure, Context, Result};
use krylov_echo::{
    goe_sample, gue_sample, ising_operator, random_state, ChainOperator, ComplexState, EstimatorKind,
    IsingParams, LinearOperator, DEFAULT_ORACLE_CAP,
};

use crate::state_file;

/// Offset separating the matrix stream from the state stream of one seed.
const MATRIX_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Ising,
    Goe,
    Gue,
    Toeplitz,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ising => "ising",
            ModelKind::Goe => "goe",
            ModelKind::Gue => "gue",
            ModelKind::Toeplitz => "toeplitz",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ising" => Ok(ModelKind::Ising),
            "goe" => Ok(ModelKind::Goe),
            "gue" => Ok(ModelKind::Gue),
            "toeplitz" => Ok(ModelKind::Toeplitz),
            other => bail!("unknown model {other:?} (expected ising, goe, gue or toeplitz)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Ising(IsingParams),
    Goe { dim: usize },
    Gue { dim: usize },
    Toeplitz { n: usize, alpha: f64, beta: f64 },
}

impl ModelSpec {
    pub fn dim(&self) -> usize {
        match *self {
            ModelSpec::Ising(p) => 1usize.checked_shl(p.n_spins as u32).unwrap_or(usize::MAX),
            ModelSpec::Goe { dim } | ModelSpec::Gue { dim } => dim,
            ModelSpec::Toeplitz { n, .. } => n,
        }
    }

    /// Builds the operator and its default initial state: a random state for
    /// the ising and random-matrix models, the first site for a chain.
    pub fn build(&self, seed: u64) -> Result<Model> {
        let operator: Box<dyn LinearOperator> = match *self {
            ModelSpec::Ising(p) => Box::new(ising_operator(p)?),
            ModelSpec::Goe { dim } => Box::new(goe_sample(dim, seed ^ MATRIX_STREAM)?),
            ModelSpec::Gue { dim } => Box::new(gue_sample(dim, seed ^ MATRIX_STREAM)?),
            ModelSpec::Toeplitz { n, alpha, beta } => Box::new(ChainOperator::homogeneous(n, alpha, beta)?),
        };
        let dim = operator.dim();
        let initial = match self {
            ModelSpec::Toeplitz { .. } => ComplexState::basis(dim, 0),
            _ => random_state(dim, seed)?,
        };
        Ok(Model { operator, initial })
    }
}

/// A Hamiltonian together with the initial state it is paired with.
pub struct Model {
    pub operator: Box<dyn LinearOperator>,
    pub initial: ComplexState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    /// Spins for ising, dimension for goe/gue, sites for toeplitz.
    pub n: usize,
    pub j: f64,
    pub h_x: f64,
    pub h_z: f64,
    pub alpha: f64,
    pub beta: f64,
    pub krylov_size: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub t_final: f64,
    pub oracle_cap: usize,
    /// Snapshot times.
    pub times: Vec<f64>,
    /// Length `M ≥ N` of the basis the snapshot profiles are projected on;
    /// `2N` capped at the dimension when unset.
    pub extended_size: Option<usize>,
    /// Adds the min/max coefficient envelope to the bounds table.
    pub band: bool,
    /// Second chain length of the toeplitz command; `N + 1` when unset.
    pub n_prime: Option<usize>,
    pub state_in: Option<PathBuf>,
    pub state_out: Option<PathBuf>,
    pub max_steps: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Ising,
            n: 10,
            j: 1.0,
            h_x: 1.0,
            h_z: 0.5,
            alpha: 0.0,
            beta: 1.0,
            krylov_size: 30,
            t_min: 0.0,
            t_max: 6.0,
            n_points: 241,
            seed: 1,
            estimators: EstimatorKind::CHEAP.to_vec(),
            out: None,
            tol: 1e-8,
            t_final: 100.0,
            oracle_cap: DEFAULT_ORACLE_CAP,
            times: vec![0.0, 0.5, 2.2, 3.0],
            extended_size: None,
            band: false,
            n_prime: None,
            state_in: None,
            state_out: None,
            max_steps: 100_000,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| anyhow!("invalid value {value:?} for {key}: {e}"))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse_num(key, s)).collect()
}

/// An empty value clears the setting.
fn parse_optional(key: &str, value: &str) -> Result<Option<usize>> {
    if value.is_empty() {
        Ok(None)
    } else {
        parse_num(key, value).map(Some)
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => bail!("invalid value {value:?} for {key}: expected true or false"),
    }
}

fn optional_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Reads `path` on top of the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config = Self::default();
        config.merge_str(&text).with_context(|| format!("in {}", path.display()))?;
        Ok(config)
    }

    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value, got {raw:?}", lineno + 1))?;
            self.set(key.trim(), value.trim()).with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model" => self.model = value.parse()?,
            "n" => self.n = parse_num(key, value)?,
            "j" => self.j = parse_num(key, value)?,
            "h_x" => self.h_x = parse_num(key, value)?,
            "h_z" => self.h_z = parse_num(key, value)?,
            "alpha" => self.alpha = parse_num(key, value)?,
            "beta" => self.beta = parse_num(key, value)?,
            "krylov_size" => self.krylov_size = parse_num(key, value)?,
            "t_min" => self.t_min = parse_num(key, value)?,
            "t_max" => self.t_max = parse_num(key, value)?,
            "n_points" => self.n_points = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "estimators" => self.estimators = parse_list(key, value)?,
            "out" => self.out = optional_path(value),
            "tol" => self.tol = parse_num(key, value)?,
            "t_final" => self.t_final = parse_num(key, value)?,
            "oracle_cap" => self.oracle_cap = parse_num(key, value)?,
            "times" => self.times = parse_list(key, value)?,
            "extended_size" => self.extended_size = parse_optional(key, value)?,
            "band" => self.band = parse_bool(key, value)?,
            "n_prime" => self.n_prime = parse_optional(key, value)?,
            "state_in" => self.state_in = optional_path(value),
            "state_out" => self.state_out = optional_path(value),
            "max_steps" => self.max_steps = parse_num(key, value)?,
            other => bail!("unknown configuration key {other:?}"),
        }
        Ok(())
    }

    /// Every key with its current value, in a fixed order. Feeding these back
    /// through [`ExperimentConfig::set`] reproduces the configuration.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        vec![
            ("model", self.model.name().to_string()),
            ("n", self.n.to_string()),
            ("j", self.j.to_string()),
            ("h_x", self.h_x.to_string()),
            ("h_z", self.h_z.to_string()),
            ("alpha", self.alpha.to_string()),
            ("beta", self.beta.to_string()),
            ("krylov_size", self.krylov_size.to_string()),
            ("t_min", self.t_min.to_string()),
            ("t_max", self.t_max.to_string()),
            ("n_points", self.n_points.to_string()),
            ("seed", self.seed.to_string()),
            ("estimators", join(&self.estimators)),
            ("out", path(&self.out)),
            ("tol", self.tol.to_string()),
            ("t_final", self.t_final.to_string()),
            ("oracle_cap", self.oracle_cap.to_string()),
            ("times", join(&self.times)),
            ("extended_size", opt(self.extended_size)),
            ("band", self.band.to_string()),
            ("n_prime", opt(self.n_prime)),
            ("state_in", path(&self.state_in)),
            ("state_out", path(&self.state_out)),
            ("max_steps", self.max_steps.to_string()),
        ]
    }

    pub fn model_spec(&self) -> ModelSpec {
        match self.model {
            ModelKind::Ising => {
                ModelSpec::Ising(IsingParams { n_spins: self.n, j: self.j, h_x: self.h_x, h_z: self.h_z })
            }
            ModelKind::Goe => ModelSpec::Goe { dim: self.n },
            ModelKind::Gue => ModelSpec::Gue { dim: self.n },
            ModelKind::Toeplitz => ModelSpec::Toeplitz { n: self.n, alpha: self.alpha, beta: self.beta },
        }
    }

    /// The operator and the initial state, read from `state_in` when set.
    pub fn build_model(&self) -> Result<Model> {
        let mut model = self.model_spec().build(self.seed)?;
        if let Some(path) = &self.state_in {
            let state = state_file::read_state(path)?;
            ensure!(
                state.dim() == model.operator.dim(),
                "state file {} has dimension {}, model has {}",
                path.display(),
                state.dim(),
                model.operator.dim()
            );
            model.initial = state;
        }
        Ok(model)
    }

    /// Uniform grid `t_min..=t_max` with `n_points` points.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.n_points;
        let step = (self.t_max - self.t_min) / (n - 1) as f64;
        (0..n).map(|i| if i == n - 1 { self.t_max } else { self.t_min + step * i as f64 }).collect()
    }

    pub fn validate_grid(&self) -> Result<()> {
        ensure!(self.t_min.is_finite() && self.t_max.is_finite(), "time grid bounds must be finite");
        ensure!(self.t_min < self.t_max, "t_min = {} must be below t_max = {}", self.t_min, self.t_max);
        ensure!(self.n_points >= 2, "n_points = {} must be at least 2", self.n_points);
        Ok(())
    }

    pub fn validate_krylov_size(&self) -> Result<()> {
        let dim = self.model_spec().dim();
        ensure!(self.krylov_size >= 1, "krylov_size must be at least 1");
        ensure!(
            self.krylov_size <= dim,
            "krylov_size = {} exceeds the model dimension {dim}",
            self.krylov_size
        );
        Ok(())
    }

    pub fn validate_oracle(&self) -> Result<()> {
        let dim = self.model_spec().dim();
        ensure!(
            dim <= self.oracle_cap,
            "model dimension {dim} exceeds the oracle cap {}; this command needs the dense oracle",
            self.oracle_cap
        );
        Ok(())
    }
}
