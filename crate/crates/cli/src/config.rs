//! Run configuration: command-line flags over a JSON config file over defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use bergman_toeplitz::carleson::DEFAULT_P;
use bergman_toeplitz::operators::POWER_ITERATION_CAP;
use bergman_toeplitz::quadrature::{DEFAULT_ANGULAR_NODES, DEFAULT_RADIAL_NODES};
use clap::ValueEnum;
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_DIM: usize = 64;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_NORM_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub n_r: usize,
    pub n_theta: usize,
    pub p: f64,
    pub norm_tol: f64,
    /// Power-iteration cap for operator norms.
    pub max_iter: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Experiment parameters, `key=value`.
    pub params: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: DEFAULT_DIM,
            n_r: DEFAULT_RADIAL_NODES,
            n_theta: DEFAULT_ANGULAR_NODES,
            p: DEFAULT_P,
            norm_tol: DEFAULT_NORM_TOL,
            max_iter: POWER_ITERATION_CAP,
            seed: DEFAULT_SEED,
            format: Format::Csv,
            out: None,
            params: BTreeMap::new(),
        }
    }
}

/// Every field optional; present fields override the defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dim: Option<usize>,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,
    pub p: Option<f64>,
    pub norm_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

/// Values given on the command line.
#[derive(Debug, Default, Clone)]
pub struct FlagConfig {
    pub dim: Option<usize>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub params: Vec<(String, String)>,
}

pub fn parse_param(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(format!("expected key=value, got '{s}'")),
    }
}

pub fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    crate::parse_json(&text, path)
}

fn param_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl RunConfig {
    pub fn resolve(file: Option<FileConfig>, flags: FlagConfig) -> Result<Self, CliError> {
        let file = file.unwrap_or_default();
        let d = RunConfig::default();
        let mut params: BTreeMap<String, String> = file.params.iter().map(|(k, v)| (k.clone(), param_text(v))).collect();
        params.extend(flags.params);
        let cfg = RunConfig {
            dim: flags.dim.or(file.dim).unwrap_or(d.dim),
            n_r: file.n_r.unwrap_or(d.n_r),
            n_theta: file.n_theta.unwrap_or(d.n_theta),
            p: flags.p.or(file.p).unwrap_or(d.p),
            norm_tol: file.norm_tol.unwrap_or(d.norm_tol),
            max_iter: file.max_iter.unwrap_or(d.max_iter),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            format: flags.format.or(file.format).unwrap_or(d.format),
            out: flags.out.or(file.out),
            params,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        let mut bad = Vec::new();
        if self.dim == 0 {
            bad.push("dim must be at least 1".to_string());
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            bad.push(format!("p must lie in (0, 1), got {}", self.p));
        }
        if !(self.norm_tol > 0.0) {
            bad.push(format!("norm_tol must be positive, got {}", self.norm_tol));
        }
        if self.max_iter == 0 {
            bad.push("max_iter must be positive".to_string());
        }
        if self.n_r == 0 || self.n_theta == 0 {
            bad.push("quadrature node counts must be positive".to_string());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Invalid(bad))
        }
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn param_f64(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.param(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Invalid(vec![format!("parameter {key}: expected a number, got '{s}'")])),
        }
    }

    pub fn param_usize(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.param(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Invalid(vec![format!("parameter {key}: expected a nonnegative integer, got '{s}'")])),
        }
    }

    pub fn param_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.param(key) {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| CliError::Invalid(vec![format!("parameter {key}: bad number '{t}'")]))
                })
                .collect(),
        }
    }
}
