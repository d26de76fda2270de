//! Bessel → Airy → Bessel connection for α = 0 with the amplitude-phase
//! tail ρ_f F(t) e^{i(λt³/3 + S₀)}.

use crate::approx::{airy_local, bessel_local, AiryOptions, ApproxError, LocalSolution};
use crate::dynamics::U1State;
use crate::model::{ModelError, ModelParams};
use crate::C64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConnectError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error("critical times out of order: t1 = {0} >= t2 = {1}")]
    Order(f64, f64),
    #[error("need t_i < t1 < t2 < t_f, got {t_i}, {t1}, {t2}, {t_f}")]
    Window { t_i: f64, t1: f64, t2: f64, t_f: f64 },
    #[error("connection needs alpha = 0 (got {0}); use the regime approximations directly")]
    NonZeroAlpha(f64),
    #[error("connection needs lambda > 0 (got {0})")]
    Lambda(f64),
    #[error("tail needs t2 > 0 (got {0})")]
    TailTime(f64),
    #[error("Im U at t2 = {0} is zero; perturb t2")]
    ZeroImaginary(f64),
}

/// Matching times: ±(2/λ)^{1/3}, or the override verbatim.
pub fn critical_times(params: &ModelParams, times: Option<(f64, f64)>) -> Result<(f64, f64), ConnectError> {
    if params.beta == 0.0 {
        return Err(ModelError::ZeroBeta.into());
    }
    let (t1, t2) = match times {
        Some(t) => t,
        None => {
            let t = (2.0 / params.lambda().abs()).cbrt();
            (-t, t)
        }
    };
    if !(t1 < t2) {
        return Err(ConnectError::Order(t1, t2));
    }
    Ok((t1, t2))
}

/// Coefficients of `target` whose value and derivative at t equal the given ones.
pub fn match_at(value: C64, deriv: C64, target: &LocalSolution, t: f64) -> Result<(C64, C64), ConnectError> {
    let mut s = *target;
    s.fit(t, value, deriv)?;
    Ok((s.c1, s.c2))
}

/// Slowly varying tail ρ_f F(t) e^{i(λt³/3 + S₀)}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tail {
    pub rho_f: f64,
    pub s0: f64,
    pub lambda: f64,
    pub f_abs2: f64,
}

impl Tail {
    /// Ṡ = √(|f|² + λ²t⁴).
    pub fn s_dot(&self, t: f64) -> f64 {
        (self.f_abs2 + self.lambda * self.lambda * t.powi(4)).sqrt()
    }

    /// F(t) = √((1 + λt²/Ṡ)/2).
    pub fn envelope(&self, t: f64) -> f64 {
        ((1.0 + self.lambda * t * t / self.s_dot(t)) / 2.0).sqrt()
    }

    pub fn envelope_dot(&self, t: f64) -> f64 {
        let sd = self.s_dot(t);
        self.lambda * t * self.f_abs2 / (sd * sd * sd) / (2.0 * self.envelope(t))
    }

    /// ρ(t) = ρ_f F(t).
    pub fn rho(&self, t: f64) -> f64 {
        self.rho_f * self.envelope(t)
    }

    pub fn phase(&self, t: f64) -> f64 {
        self.lambda * t.powi(3) / 3.0 + self.s0
    }

    /// Tail value and time derivative.
    pub fn eval(&self, t: f64) -> (C64, C64) {
        let e = C64::from_polar(1.0, self.phase(t));
        let f = self.envelope(t);
        let v = self.rho_f * f * e;
        let d = self.rho_f * C64::new(self.envelope_dot(t), f * self.lambda * t * t) * e;
        (v, d)
    }
}

/// Result of fitting the tail at t2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit {
    pub tail: Tail,
    pub c1: C64,
    pub c2: C64,
}

/// ρ_f, S₀ and the Bessel coefficients of U − tail at t2.
pub fn amplitude_phase_tail(params: &ModelParams, value: C64, deriv: C64, t2: f64) -> Result<TailFit, ConnectError> {
    let lambda = params.lambda();
    if !(lambda > 0.0) {
        return Err(ConnectError::Lambda(lambda));
    }
    if !(t2 > 0.0) {
        return Err(ConnectError::TailTime(t2));
    }
    let mut tail = Tail { rho_f: 0.0, s0: 0.0, lambda, f_abs2: params.f_abs2() };
    let zero = C64::new(0.0, 0.0);
    if value == zero && deriv == zero {
        return Ok(TailFit { tail, c1: zero, c2: zero });
    }
    if value.im == 0.0 {
        return Err(ConnectError::ZeroImaginary(value.im));
    }
    let (f, fd, sd) = (tail.envelope(t2), tail.envelope_dot(t2), tail.s_dot(t2));
    let r = deriv.im / value.im - fd / f;
    let x = r / sd;
    // arccot on (0, π); the other branch keeps ρ_f ≥ 0 when Im U < 0
    let mut s = PI / 2.0 - x.atan();
    if value.im < 0.0 {
        s += PI;
    }
    tail.rho_f = (value.im / f * (1.0 + x * x).sqrt()).abs();
    tail.s0 = reduce(s - lambda * t2.powi(3) / 3.0);
    let seg = bessel_local(params, (t2, t2 + 1.0), false)?;
    let (tv, td) = tail.eval(t2);
    let (c1, c2) = match_at(value - tv, deriv - td, &seg, t2)?;
    Ok(TailFit { tail, c1, c2 })
}

fn reduce(x: f64) -> f64 {
    let y = x - 2.0 * PI * ((x + PI) / (2.0 * PI)).floor();
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMode {
    With,
    Without,
}

/// Three-segment solution on [t_i, t_f].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiecewiseSolution {
    pub seg1: LocalSolution,
    pub seg2: LocalSolution,
    /// Bessel part of segment III once the tail is subtracted.
    pub seg3: LocalSolution,
    /// Segment III matched without a tail.
    pub seg3_bare: LocalSolution,
    pub t1: f64,
    pub t2: f64,
    pub tail: Tail,
}

impl PiecewiseSolution {
    /// U₁ and U̇₁ at t with the tail attached.
    pub fn eval(&self, t: f64) -> Result<(C64, C64), ConnectError> {
        self.eval_mode(t, TailMode::With)
    }

    pub fn eval_mode(&self, t: f64, mode: TailMode) -> Result<(C64, C64), ConnectError> {
        Ok(if t < self.t1 {
            self.seg1.eval(t)?
        } else if t < self.t2 {
            self.seg2.eval(t)?
        } else {
            match mode {
                TailMode::Without => self.seg3_bare.eval(t)?,
                TailMode::With => {
                    let (u, d) = self.seg3.eval(t)?;
                    let (tv, td) = self.tail.eval(t);
                    (u + tv, d + td)
                }
            }
        })
    }

    pub fn probability(&self, t: f64) -> Result<f64, ConnectError> {
        Ok(self.eval(t)?.0.norm_sqr())
    }

    /// Long-time transition probability ρ_f².
    pub fn final_probability(&self) -> f64 {
        self.tail.rho_f * self.tail.rho_f
    }

    /// Largest value and derivative jumps at t1 and t2 (with the tail).
    pub fn continuity_defect(&self) -> Result<f64, ConnectError> {
        let (a, ad) = self.seg1.eval(self.t1)?;
        let (b, bd) = self.seg2.eval(self.t1)?;
        let (c, cd) = self.seg2.eval(self.t2)?;
        let (d, dd) = self.eval(self.t2)?;
        Ok([(a - b).norm(), (ad - bd).norm(), (c - d).norm(), (cd - dd).norm()].into_iter().fold(0.0, f64::max))
    }
}

/// Connect from `init` at t_i through the Airy window to the tail.
pub fn piecewise_solution(
    params: &ModelParams,
    t_i: f64,
    t_f: f64,
    init: U1State,
    times: Option<(f64, f64)>,
) -> Result<PiecewiseSolution, ConnectError> {
    if params.alpha != 0.0 {
        return Err(ConnectError::NonZeroAlpha(params.alpha));
    }
    let (t1, t2) = critical_times(params, times)?;
    if !(t_i < t1 && t2 < t_f) {
        return Err(ConnectError::Window { t_i, t1, t2, t_f });
    }
    let mut seg1 = bessel_local(params, (t_i, t1), false)?;
    seg1.fit(init.t, init.u1, init.u1dot)?;
    let mut seg2 = airy_local(params, (t1, t2), false, AiryOptions::default())?;
    let (u, d) = seg1.eval(t1)?;
    seg2.fit(t1, u, d)?;
    let (u, d) = seg2.eval(t2)?;
    let mut seg3_bare = bessel_local(params, (t2, t_f), false)?;
    seg3_bare.fit(t2, u, d)?;
    let fit = amplitude_phase_tail(params, u, d, t2)?;
    let seg3 = LocalSolution { c1: fit.c1, c2: fit.c2, ..seg3_bare };
    Ok(PiecewiseSolution { seg1, seg2, seg3, seg3_bare, t1, t2, tail: fit.tail })
}
