use crate::config::{Mode, RunConfig};
use crate::error::{num, CliError};
use glance::approx::{airy_approx, bessel_approx, pcf_approx, AiryOptions, GForm, LocalSolution};
use glance::connect::{piecewise_solution, TailMode};
use glance::dynamics::{ground_start, integrate_coupled, integrate_u1, write_csv, TwoLevelState};
use glance::heun::stokes_estimate;
use glance::identities::{identity_suite, SuiteReport};
use glance::{ModelParams, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};

pub const SCHEMA_VERSION: u32 = 1;

/// Per-run choices that are not part of the config schema.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Report the homogeneous (approximations) or tail-free (connection) curve.
    pub plain: bool,
    pub g_form: GForm,
    pub verify_points: usize,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { plain: false, g_form: GForm::Derived, verify_points: 20, seed: 7 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryParams {
    pub f_re: f64,
    pub f_im: f64,
    pub alpha: f64,
    pub beta: f64,
    pub t_i: f64,
    pub t_f: f64,
    pub tol: f64,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub sample_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitySummary {
    pub cases: usize,
    pub derivative: f64,
    pub quadrature: f64,
    pub wronskian: f64,
    pub passed: bool,
}

impl From<SuiteReport> for IdentitySummary {
    fn from(r: SuiteReport) -> Self {
        Self { cases: r.cases, derivative: r.derivative, quadrature: r.quadrature, wronskian: r.wronskian, passed: r.passed() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub mode: Mode,
    pub params: SummaryParams,
    pub p_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_f_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<BTreeMap<String, [f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_error_vs_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uncertainty: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitySummary>,
}

impl Summary {
    fn new(cfg: &RunConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            mode: cfg.mode,
            params: SummaryParams {
                f_re: cfg.f_re,
                f_im: cfg.f_im,
                alpha: cfg.alpha,
                beta: cfg.beta,
                t_i: cfg.t_i,
                t_f: cfg.t_f,
                tol: cfg.tol,
                t1: cfg.t1,
                t2: cfg.t2,
                sample_count: cfg.sample_count,
            },
            p_final: None,
            rho_f_sq: None,
            s0: None,
            coefficients: None,
            sup_error_vs_exact: None,
            uncertainty: None,
            identities: None,
        }
    }

    /// True unless an identity check failed.
    pub fn ok(&self) -> bool {
        self.identities.as_ref().is_none_or(|r| r.passed)
    }
}

fn create(path: &str) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::Config(format!("cannot write `{path}`: {e}")))
}

fn io_err(path: &str) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Config(format!("cannot write `{path}`: {e}"))
}

fn grid(cfg: &RunConfig) -> Vec<f64> {
    let n = cfg.sample_count;
    (0..n).map(|k| cfg.t_i + (cfg.t_f - cfg.t_i) * k as f64 / (n - 1) as f64).collect()
}

/// Exact run from the lower level, written as the trajectory CSV.
fn trajectory(cfg: &RunConfig, p: &ModelParams) -> Result<f64, CliError> {
    let init = TwoLevelState { t: cfg.t_i, c1: C64::new(0.0, 0.0), c2: C64::new(1.0, 0.0) };
    let tr = integrate_coupled(p, init, cfg.t_f, cfg.tol).map_err(num)?;
    let path = format!("{}.csv", cfg.output_path);
    let mut out = create(&path)?;
    write_csv(&mut out, &tr.resample(cfg.sample_count)).map_err(io_err(&path))?;
    out.flush().map_err(io_err(&path))?;
    Ok(tr.end().c1.norm_sqr())
}

/// Exact |U₁|² on the grid from the figure initial condition.
fn exact_curve(cfg: &RunConfig, p: &ModelParams, ts: &[f64]) -> Result<Vec<f64>, CliError> {
    let tr = integrate_u1(p, ground_start(p, cfg.t_i), cfg.t_f, cfg.tol).map_err(num)?;
    Ok(ts.iter().map(|&t| tr.at(t).u1.norm_sqr()).collect())
}

fn write_curves(cfg: &RunConfig, names: &[&str], ts: &[f64], cols: &[Vec<f64>]) -> Result<(), CliError> {
    let path = format!("{}.curves.csv", cfg.output_path);
    let mut out = create(&path)?;
    let e = io_err(&path);
    writeln!(out, "t,{}", names.join(",")).map_err(&e)?;
    for (k, t) in ts.iter().enumerate() {
        write!(out, "{t:.16e}").map_err(&e)?;
        for c in cols {
            write!(out, ",{:.16e}", c[k]).map_err(&e)?;
        }
        writeln!(out).map_err(&e)?;
    }
    out.flush().map_err(&e)
}

fn sup_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn pair(c: C64) -> [f64; 2] {
    // adding 0.0 turns −0.0 into 0.0
    [c.re + 0.0, c.im + 0.0]
}

fn probabilities(s: &LocalSolution, ts: &[f64]) -> Result<Vec<f64>, CliError> {
    ts.iter().map(|&t| s.eval(t).map(|v| v.0.norm_sqr()).map_err(num)).collect()
}

fn local(cfg: &RunConfig, p: &ModelParams, corrected: bool, opts: &RunOptions) -> Result<LocalSolution, CliError> {
    let iv = (cfg.t_i, cfg.t_f);
    let init = ground_start(p, cfg.t_i);
    match cfg.mode {
        Mode::Airy => airy_approx(p, iv, init, corrected, AiryOptions { form: opts.g_form, include_constant: true }),
        Mode::Pcf => pcf_approx(p, iv, init, corrected),
        _ => bessel_approx(p, iv, init, corrected),
    }
    .map_err(num)
}

fn run_approx(cfg: &RunConfig, p: &ModelParams, opts: &RunOptions, s: &mut Summary) -> Result<(), CliError> {
    trajectory(cfg, p)?;
    let ts = grid(cfg);
    let hom = local(cfg, p, false, opts)?;
    let cor = local(cfg, p, true, opts)?;
    let exact = exact_curve(cfg, p, &ts)?;
    let (h, c) = (probabilities(&hom, &ts)?, probabilities(&cor, &ts)?);
    let primary = if opts.plain { &h } else { &c };
    s.p_final = primary.last().copied();
    s.sup_error_vs_exact = Some(sup_error(primary, &exact));
    s.coefficients = Some(BTreeMap::from([
        ("homogeneous_c1".to_string(), pair(hom.c1)),
        ("homogeneous_c2".to_string(), pair(hom.c2)),
        ("corrected_c1".to_string(), pair(cor.c1)),
        ("corrected_c2".to_string(), pair(cor.c2)),
    ]));
    write_curves(cfg, &["exact", "homogeneous", "corrected"], &ts, &[exact, h, c])
}

fn run_connect(cfg: &RunConfig, p: &ModelParams, opts: &RunOptions, s: &mut Summary) -> Result<(), CliError> {
    trajectory(cfg, p)?;
    let sol = piecewise_solution(p, cfg.t_i, cfg.t_f, ground_start(p, cfg.t_i), cfg.times()).map_err(num)?;
    let ts = grid(cfg);
    let curve =
        |mode| -> Result<Vec<f64>, CliError> { ts.iter().map(|&t| sol.eval_mode(t, mode).map(|v| v.0.norm_sqr()).map_err(num)).collect() };
    let (with, without) = (curve(TailMode::With)?, curve(TailMode::Without)?);
    let exact = exact_curve(cfg, p, &ts)?;
    let primary = if opts.plain { &without } else { &with };
    s.p_final = primary.last().copied();
    s.sup_error_vs_exact = Some(sup_error(primary, &exact));
    s.rho_f_sq = Some(sol.final_probability());
    s.s0 = Some(sol.tail.s0);
    let mut co = BTreeMap::new();
    for (name, seg) in [("seg1", &sol.seg1), ("seg2", &sol.seg2), ("seg3", &sol.seg3), ("seg3_bare", &sol.seg3_bare)] {
        co.insert(format!("{name}_c1"), pair(seg.c1));
        co.insert(format!("{name}_c2"), pair(seg.c2));
    }
    co.insert("t1_t2".to_string(), [sol.t1, sol.t2]);
    s.coefficients = Some(co);
    write_curves(cfg, &["exact", "with_tail", "without_tail"], &ts, &[exact, with, without])
}

/// Execute one run and write its output files.
pub fn execute(cfg: &RunConfig, opts: &RunOptions) -> Result<Summary, CliError> {
    let mut s = Summary::new(cfg);
    match cfg.mode {
        Mode::Verify => {
            let mut rng = StdRng::seed_from_u64(opts.seed);
            let points: Vec<[f64; 4]> = (0..opts.verify_points).map(|_| rng.gen()).collect();
            s.identities = Some(identity_suite(&points).map_err(num)?.into());
        }
        mode => {
            let p = cfg.params()?;
            match mode {
                Mode::Exact => s.p_final = Some(trajectory(cfg, &p)?),
                Mode::Airy | Mode::Pcf | Mode::Bessel => run_approx(cfg, &p, opts, &mut s)?,
                Mode::Connect => run_connect(cfg, &p, opts, &mut s)?,
                Mode::Stokes => {
                    let e = stokes_estimate(&p, cfg.t_f, cfg.tol).map_err(num)?;
                    s.p_final = Some(e.probability());
                    s.uncertainty = Some(e.uncertainty);
                    s.coefficients = Some(BTreeMap::from([("amplitude".to_string(), pair(e.value))]));
                }
                Mode::Verify => unreachable!(),
            }
        }
    }
    let path = format!("{}.json", cfg.output_path);
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &s).map_err(num)?;
    writeln!(out).map_err(io_err(&path))?;
    out.flush().map_err(io_err(&path))?;
    Ok(s)
}
