//! Exact integration of the amplitude equations and asymptotic boundary data.

use crate::model::{ModelError, ModelParams};
use crate::ode::{self, OdeError, Options, Solution, Stats};
use crate::specfun::{erfc, SpecError};
use crate::C64;
use std::f64::consts::PI;
use std::io::{self, Write};
use thiserror::Error;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Default error target for exact runs.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("initial state has |C1|^2 + |C2|^2 = {0}, expected 1")]
    NotNormalized(f64),
    #[error("t = {t} is not asymptotic; need |t| > {bound}")]
    NotAsymptotic { t: f64, bound: f64 },
    #[error("detuning vanishes at t = {0}")]
    ZeroDetuning(f64),
}

/// Diabatic amplitudes at time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelState {
    pub t: f64,
    pub c1: C64,
    pub c2: C64,
}

impl TwoLevelState {
    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }
}

/// U₁ = C₁e^{iΦ/2} and its time derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct U1State {
    pub t: f64,
    pub u1: C64,
    pub u1dot: C64,
}

pub trait Sample: Copy {
    fn from_raw(t: f64, y: [C64; 2]) -> Self;
    fn raw(&self) -> [C64; 2];
    fn time(&self) -> f64;
}

impl Sample for TwoLevelState {
    fn from_raw(t: f64, y: [C64; 2]) -> Self {
        Self { t, c1: y[0], c2: y[1] }
    }
    fn raw(&self) -> [C64; 2] {
        [self.c1, self.c2]
    }
    fn time(&self) -> f64 {
        self.t
    }
}

impl Sample for U1State {
    fn from_raw(t: f64, y: [C64; 2]) -> Self {
        Self { t, u1: y[0], u1dot: y[1] }
    }
    fn raw(&self) -> [C64; 2] {
        [self.u1, self.u1dot]
    }
    fn time(&self) -> f64 {
        self.t
    }
}

/// Accepted steps of one integration, with dense output.
#[derive(Clone, Debug)]
pub struct Trajectory<S: Sample> {
    dense: Solution<f64, 2>,
    pub tol: f64,
    pub stats: Stats,
    /// max |(|C1|²+|C2|²) − 1| over accepted steps; `None` for U₁ runs.
    pub norm_drift: Option<f64>,
    _s: std::marker::PhantomData<S>,
}

impl<S: Sample> Trajectory<S> {
    fn new(dense: Solution<f64, 2>, tol: f64, norm_drift: Option<f64>) -> Self {
        Self { stats: dense.stats, dense, tol, norm_drift, _s: std::marker::PhantomData }
    }

    /// Interpolated state (cubic Hermite), clamped to the integrated span.
    pub fn at(&self, t: f64) -> S {
        S::from_raw(t, self.dense.at(t))
    }

    /// State at the integration start.
    pub fn start(&self) -> S {
        S::from_raw(self.dense.t_start(), self.dense.y[0])
    }

    /// State at the integration end.
    pub fn end(&self) -> S {
        let (t, y) = self.dense.last();
        S::from_raw(t, y)
    }

    /// Accepted steps in increasing time.
    pub fn samples(&self) -> Vec<S> {
        let mut v: Vec<S> = self.dense.t.iter().zip(&self.dense.y).map(|(&t, &y)| S::from_raw(t, y)).collect();
        if v.len() > 1 && v[0].time() > v[v.len() - 1].time() {
            v.reverse();
        }
        v
    }

    /// `n ≥ 2` uniformly spaced states over the span, in increasing time.
    pub fn resample(&self, n: usize) -> Vec<S> {
        let (a, b) = (self.dense.t_start(), self.dense.t_end());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let t = if k == n - 1 { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
                self.at(t)
            })
            .collect()
    }
}

fn check_tol(tol: f64) -> Result<(), DynamicsError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(DynamicsError::BadTolerance(tol))
    }
}

// The stepper controls error per unit step at a fraction of the user target,
// which keeps the global error of long runs below `tol`.
fn options(tol: f64) -> Options<f64> {
    Options::new(tol * 0.1)
}

/// Integrate Ċ₁ = −if e^{−iΦ}C₂, Ċ₂ = −if* e^{iΦ}C₁ from `init.t` to `t_end`.
pub fn integrate_coupled(
    params: &ModelParams,
    init: TwoLevelState,
    t_end: f64,
    tol: f64,
) -> Result<Trajectory<TwoLevelState>, DynamicsError> {
    check_tol(tol)?;
    let n0 = init.norm_sqr();
    if (n0 - 1.0).abs() > (100.0 * tol).max(1e-8) {
        return Err(DynamicsError::NotNormalized(n0));
    }
    let f = params.f;
    let fc = f.conj();
    let p = *params;
    let rhs = move |t: f64, y: &[C64; 2]| {
        let e = C64::from_polar(1.0, -p.phase(t));
        [-I * f * e * y[1], -I * fc * e.conj() * y[0]]
    };
    let sol = ode::integrate(&rhs, init.t, t_end, [init.c1, init.c2], &options(tol))?;
    let drift = sol.y.iter().map(|y| (y[0].norm_sqr() + y[1].norm_sqr() - 1.0).abs()).fold(0.0, f64::max);
    Ok(Trajectory::new(sol, tol, Some(drift)))
}

/// Integrate U₁″ + J(t)U₁ = 0 from `init.t` to `t_end`.
pub fn integrate_u1(params: &ModelParams, init: U1State, t_end: f64, tol: f64) -> Result<Trajectory<U1State>, DynamicsError> {
    check_tol(tol)?;
    let p = *params;
    let rhs = move |t: f64, y: &[C64; 2]| [y[1], -p.u1_coefficient(t) * y[0]];
    let sol = ode::integrate(&rhs, init.t, t_end, [init.u1, init.u1dot], &options(tol))?;
    Ok(Trajectory::new(sol, tol, None))
}

/// U₁ = C₁e^{iΦ/2}, U̇₁ = (Ċ₁ + iΔC₁/2)e^{iΦ/2}.
pub fn u1_from_coupled(params: &ModelParams, s: &TwoLevelState) -> U1State {
    let e = C64::from_polar(1.0, 0.5 * params.phase(s.t));
    let c1dot = -I * params.f * C64::from_polar(1.0, -params.phase(s.t)) * s.c2;
    U1State { t: s.t, u1: s.c1 * e, u1dot: (c1dot + I * 0.5 * params.detuning(s.t) * s.c1) * e }
}

/// Inverse of [`u1_from_coupled`]. With f = 0 the lower amplitude is taken as 1.
pub fn coupled_from_u1(params: &ModelParams, s: &U1State) -> TwoLevelState {
    let e = C64::from_polar(1.0, -0.5 * params.phase(s.t));
    let c1 = s.u1 * e;
    let c1dot = (s.u1dot - I * 0.5 * params.detuning(s.t) * s.u1) * e;
    let c2 =
        if params.f == C64::new(0.0, 0.0) { C64::new(1.0, 0.0) } else { I * c1dot * C64::from_polar(1.0, params.phase(s.t)) / params.f };
    TwoLevelState { t: s.t, c1, c2 }
}

/// The figure initial condition U₁(t) = 0, U̇₁(t) = |f|.
pub fn ground_start(params: &ModelParams, t: f64) -> U1State {
    U1State { t, u1: C64::new(0.0, 0.0), u1dot: C64::new(params.f.norm(), 0.0) }
}

/// Earliest time treated as −∞: −max(3t*, 10|α/β|, 10|f|/|α|).
pub fn minus_infinity(params: &ModelParams) -> f64 {
    let mut bound: f64 = 0.0;
    if params.beta != 0.0 {
        if let Ok(tag) = params.classify_regime(0.0) {
            bound = bound.max(3.0 * tag.t_star);
        }
        bound = bound.max(10.0 * (params.alpha / params.beta).abs());
    }
    if params.alpha != 0.0 {
        bound = bound.max(10.0 * params.f.norm() / params.alpha.abs());
    }
    -bound
}

/// Leading large-|t| form of (C₁, Ċ₁) on the incoming side.
///
/// For β ≠ 0: C₁ = A₁(β/6)^{−2/3} e^{−i(βt³/6 + αt²/2 − α³/(6β²) − π/3)} t^{−2} with
/// A₁ = (|f|/3)(β/6)^{−1/3}. For β = 0: the linear-crossing form C₁ = f e^{−iαt²/2}/(αt).
pub fn asymptotic_seed(params: &ModelParams, t: f64) -> Result<(C64, C64), DynamicsError> {
    if params.beta == 0.0 {
        if params.alpha == 0.0 {
            return Err(ModelError::ZeroAlpha.into());
        }
        let bound = 3.0 * params.f.norm() / params.alpha.abs();
        if t.abs() <= bound {
            return Err(DynamicsError::NotAsymptotic { t, bound });
        }
        let c1 = params.f * C64::from_polar(1.0, -0.5 * params.alpha * t * t) / (params.alpha * t);
        let c1dot = c1 * (-I * params.alpha * t - 1.0 / t);
        return Ok((c1, c1dot));
    }
    let (a, b) = (params.alpha, params.beta);
    let t_star = params.classify_regime(t)?.t_star;
    let bound = 3.0 * t_star.max((a / b).abs());
    if t.abs() <= bound {
        return Err(DynamicsError::NotAsymptotic { t, bound });
    }
    let a1 = params.f.norm() / 3.0 * (b / 6.0).powf(-1.0 / 3.0);
    let amp = a1 * (b / 6.0).powf(-2.0 / 3.0) / (t * t);
    let arg = -(b * t.powi(3) / 6.0 + a * t * t / 2.0 - a.powi(3) / (6.0 * b * b) - PI / 3.0);
    let c1 = C64::from_polar(amp, arg);
    let c1dot = c1 * (-I * params.detuning(t) - 2.0 / t);
    Ok((c1, c1dot))
}

/// Adiabatic ratio C₁/C₂ through second order:
/// f e^{−iΦ}(1/Δ + iΔ′/Δ³ − |f|²/Δ³).
pub fn adiabatic_ratio(params: &ModelParams, t: f64) -> Result<C64, DynamicsError> {
    let d = params.detuning(t);
    if d == 0.0 {
        return Err(DynamicsError::ZeroDetuning(t));
    }
    let dp = params.alpha + params.beta * t;
    let d3 = d * d * d;
    let k = C64::new(1.0 / d - params.f_abs2() / d3, dp / d3);
    Ok(params.f * C64::from_polar(1.0, -params.phase(t)) * k)
}

/// Size of the first neglected adiabatic term, |f|(|Δ″|/|Δ|³ + Δ′²/Δ⁴).
pub fn adiabatic_error(params: &ModelParams, t: f64) -> f64 {
    let d = params.detuning(t).abs();
    let dp = params.alpha + params.beta * t;
    params.f.norm() * (params.beta.abs() / d.powi(3) + dp * dp / d.powi(4))
}

/// Normalized adiabatic state at large |t|, with C₂ real.
pub fn seed_state(params: &ModelParams, t: f64) -> Result<TwoLevelState, DynamicsError> {
    let c1 = adiabatic_ratio(params, t)?;
    let n = (1.0 + c1.norm_sqr()).sqrt();
    Ok(TwoLevelState { t, c1: c1 / n, c2: C64::new(1.0 / n, 0.0) })
}

/// C₁ with the adiabatically following part removed; tends to C₁(∞).
pub fn final_amplitude(params: &ModelParams, s: &TwoLevelState) -> C64 {
    match adiabatic_ratio(params, s.t) {
        Ok(r) => s.c1 - r * s.c2,
        Err(_) => s.c1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailModel {
    Linear,
    Parabolic,
}

/// Large-|t| amplitudes from direct integration of the weak-coupling equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailForm {
    pub c1: C64,
    pub c2: C64,
    /// |C₂(+∞)|/|C₂(−∞)| implied by the form.
    pub ratio: f64,
    /// Set when the form is known to contradict the exact dynamics.
    pub caveat: bool,
}

/// Asymptotic tails normalized to |C₂(−∞)| = 1.
///
/// Linear: C₂ = A|t|^{−iγ}, C₁ = f A e^{−iαt²/2}|t|^{−iγ}/(αt) with A = 1 for t < 0 and
/// A = e^{−π|γ|} for t > 0, γ = |f|²/α. Parabolic: C₂ = exp(−i|f|²∫dt/Δ), whose modulus
/// never changes, so the ratio is 1 and `caveat` is set.
pub fn adiabatic_tail(params: &ModelParams, model: TailModel, t: f64) -> Result<TailForm, DynamicsError> {
    let f2 = params.f_abs2();
    let d = params.detuning(t);
    if d == 0.0 {
        return Err(DynamicsError::ZeroDetuning(t));
    }
    match model {
        TailModel::Linear => {
            let gamma = params.gamma_lz()?;
            let ratio = (-PI * gamma.abs()).exp();
            let amp = if t > 0.0 { ratio } else { 1.0 };
            let c2 = C64::from_polar(amp, -gamma * t.abs().ln());
            let c1 = params.f * C64::from_polar(1.0, -0.5 * params.alpha * t * t) * c2 / (params.alpha * t);
            Ok(TailForm { c1, c2, ratio, caveat: false })
        }
        TailModel::Parabolic => {
            if params.beta == 0.0 {
                return Err(ModelError::ZeroBeta.into());
            }
            let integral = if params.alpha == 0.0 {
                -2.0 / (params.beta * t)
            } else {
                (t / (t + 2.0 * params.alpha / params.beta)).abs().ln() / params.alpha
            };
            let c2 = C64::from_polar(1.0, -f2 * integral);
            let c1 = params.f * C64::from_polar(1.0, -params.phase(t)) * c2 / d;
            Ok(TailForm { c1, c2, ratio: 1.0, caveat: true })
        }
    }
}

/// First-order linear-crossing amplitude from C₁(−∞) = 0, C₂ ≡ 1:
/// C₁(t) = −if ∫_{−∞}^t e^{−iαs²/2}ds = −if e^{−iπ/4}√(π/(2α)) erfc(−e^{iπ/4}√(α/2) t), α > 0.
pub fn linear_weak_coupling_c1(params: &ModelParams, t: f64) -> Result<C64, DynamicsError> {
    let a = params.alpha;
    if a <= 0.0 {
        return Err(ModelError::ZeroAlpha.into());
    }
    let z = -C64::from_polar((a / 2.0).sqrt() * t, PI / 4.0);
    let pref = -I * params.f * C64::from_polar((PI / (2.0 * a)).sqrt(), -PI / 4.0);
    Ok(pref * erfc(z)?)
}

/// Write `t,re_c1,im_c1,re_c2,im_c2,p1,p2` rows.
pub fn write_csv<W: Write>(out: &mut W, states: &[TwoLevelState]) -> io::Result<()> {
    writeln!(out, "t,re_c1,im_c1,re_c2,im_c2,p1,p2")?;
    for s in states {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.t,
            s.c1.re,
            s.c1.im,
            s.c2.re,
            s.c2.im,
            s.c1.norm_sqr(),
            s.c2.norm_sqr()
        )?;
    }
    Ok(())
}
