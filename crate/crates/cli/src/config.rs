use crate::error::CliError;
use clap::{Args, ValueEnum};
use glance::{ModelParams, C64};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 2000;
pub const DEFAULT_OUT: &str = "glance_out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Airy,
    Pcf,
    Bessel,
    Connect,
    Stokes,
    Verify,
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub f_re: f64,
    pub f_im: f64,
    pub alpha: f64,
    pub beta: f64,
    pub t_i: f64,
    pub t_f: f64,
    pub tol: f64,
    pub mode: Mode,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub output_path: String,
    pub sample_count: usize,
}

impl RunConfig {
    pub fn params(&self) -> Result<ModelParams, CliError> {
        ModelParams::new(C64::new(self.f_re, self.f_im), self.alpha, self.beta).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn times(&self) -> Option<(f64, f64)> {
        self.t1.zip(self.t2)
    }
}

/// Config file contents and flag overrides: every field optional.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    /// Real part of the coupling f.
    #[arg(long = "f-re")]
    pub f_re: Option<f64>,
    /// Imaginary part of the coupling f.
    #[arg(long = "f-im")]
    pub f_im: Option<f64>,
    /// Linear detuning rate.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Quadratic detuning rate.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Start time.
    #[arg(long = "t-i", allow_negative_numbers = true)]
    pub t_i: Option<f64>,
    /// End time.
    #[arg(long = "t-f", allow_negative_numbers = true)]
    pub t_f: Option<f64>,
    /// Integration tolerance [default: 1e-10].
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(skip)]
    pub mode: Option<Mode>,
    /// First matching time of the connection.
    #[arg(long, allow_negative_numbers = true)]
    pub t1: Option<f64>,
    /// Second matching time of the connection.
    #[arg(long, allow_negative_numbers = true)]
    pub t2: Option<f64>,
    /// Output stem: writes <stem>.csv, <stem>.json and, for comparisons, <stem>.curves.csv.
    #[arg(long = "out")]
    pub output_path: Option<String>,
    /// Number of output samples [default: 2000].
    #[arg(long = "samples")]
    pub sample_count: Option<usize>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: PartialConfig) -> Self {
        Self {
            f_re: over.f_re.or(self.f_re),
            f_im: over.f_im.or(self.f_im),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            t_i: over.t_i.or(self.t_i),
            t_f: over.t_f.or(self.t_f),
            tol: over.tol.or(self.tol),
            mode: over.mode.or(self.mode),
            t1: over.t1.or(self.t1),
            t2: over.t2.or(self.t2),
            output_path: over.output_path.or(self.output_path),
            sample_count: over.sample_count.or(self.sample_count),
        }
    }

    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Config(format!("missing field `{name}`")));
        let cfg = RunConfig {
            f_re: need(self.f_re, "f_re")?,
            f_im: self.f_im.unwrap_or(0.0),
            alpha: need(self.alpha, "alpha")?,
            beta: need(self.beta, "beta")?,
            t_i: need(self.t_i, "t_i")?,
            t_f: need(self.t_f, "t_f")?,
            tol: self.tol.unwrap_or(DEFAULT_TOL),
            mode: self.mode.unwrap_or(Mode::Exact),
            t1: self.t1,
            t2: self.t2,
            output_path: self.output_path.unwrap_or_else(|| DEFAULT_OUT.to_string()),
            sample_count: self.sample_count.unwrap_or(DEFAULT_SAMPLES),
        };
        validate(&cfg)?;
        Ok(cfg)
    }
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let bad = |m: String| Err(CliError::Config(m));
    for (name, v) in [("f_re", cfg.f_re), ("f_im", cfg.f_im), ("alpha", cfg.alpha), ("beta", cfg.beta), ("t_i", cfg.t_i), ("t_f", cfg.t_f)]
    {
        if !v.is_finite() {
            return bad(format!("`{name}` must be finite, got {v}"));
        }
    }
    if !(cfg.t_i < cfg.t_f) {
        return bad(format!("`t_i` ({}) must be less than `t_f` ({})", cfg.t_i, cfg.t_f));
    }
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return bad(format!("`tol` must be positive, got {}", cfg.tol));
    }
    if cfg.sample_count < 2 {
        return bad(format!("`sample_count` must be at least 2, got {}", cfg.sample_count));
    }
    match (cfg.t1, cfg.t2) {
        (Some(a), Some(b)) if !(a < b) => bad(format!("`t1` ({a}) must be less than `t2` ({b})")),
        (Some(_), None) | (None, Some(_)) => bad("`t1` and `t2` must be given together".to_string()),
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[value(name = "1")]
    F1,
    #[value(name = "2a")]
    F2a,
    #[value(name = "2b")]
    F2b,
    #[value(name = "3")]
    F3,
    #[value(name = "4a")]
    F4a,
    #[value(name = "4b")]
    F4b,
}

/// Matching times of the connection presets.
pub const PRESET_TIMES: (f64, f64) = (-3.2097, 2.0335);

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::F1 => "1",
            Figure::F2a => "2a",
            Figure::F2b => "2b",
            Figure::F3 => "3",
            Figure::F4a => "4a",
            Figure::F4b => "4b",
        }
    }

    pub fn preset(self) -> PartialConfig {
        let (f, alpha, beta, t_i, t_f, mode) = match self {
            Figure::F1 => (1.0, 0.2, 2.0, -1.0, 2.0, Mode::Airy),
            Figure::F2a => (1.0, 2.0, 0.2, -1.0, 2.0, Mode::Pcf),
            Figure::F2b => (1.0, 2.0, 0.2, -10.0, 10.0, Mode::Pcf),
            Figure::F3 => (1.0, 1.0, 2.0, -5.0, -1.0, Mode::Bessel),
            Figure::F4a => (1.0, 0.0, 2.0, -10.0, 10.0, Mode::Connect),
            Figure::F4b => (1.0, 0.0, 2.0, -10.0, 50.0, Mode::Connect),
        };
        let times = matches!(self, Figure::F4a | Figure::F4b).then_some(PRESET_TIMES);
        PartialConfig {
            f_re: Some(f),
            f_im: Some(0.0),
            alpha: Some(alpha),
            beta: Some(beta),
            t_i: Some(t_i),
            t_f: Some(t_f),
            mode: Some(mode),
            t1: times.map(|t| t.0),
            t2: times.map(|t| t.1),
            output_path: Some(format!("figure_{}", self.name())),
            ..Default::default()
        }
    }

    /// Whether the summary reports the homogeneous curve (2b) or the bare match (4a).
    pub fn plain(self) -> bool {
        matches!(self, Figure::F2b | Figure::F4a)
    }
}
