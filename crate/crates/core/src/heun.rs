//! Tri-confluent Heun asymptotics: series coefficients, T₁/T₂ evaluation and the
//! numerically inferred final amplitude.

use crate::dynamics::{self, DynamicsError, TwoLevelState};
use crate::model::ModelParams;
use crate::C64;
use num_traits::{FromPrimitive, Num};
use std::f64::consts::PI;
use std::ops::Neg;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HeunError {
    #[error("z = {0} is outside the sector |arg z| < pi/2")]
    Sector(C64),
    #[error("z must be nonzero")]
    ZeroArgument,
    #[error("need at least one series term")]
    NoTerms,
    #[error("t_max = {t_max} is too small; need t_max > {bound}")]
    TooShort { t_max: f64, bound: f64 },
    #[error("limit did not settle: successive estimates differ by {spread}")]
    NoLimit { spread: f64 },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// a₀..a_K of Σ a_k z^{−k}.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoeffs<T> {
    pub mu: T,
    pub nu: T,
    pub xi: T,
    pub a: Vec<T>,
}

fn lit<T: FromPrimitive>(x: i64) -> T {
    T::from_i64(x).expect("small integer literal")
}

/// Coefficients a₀..a_K from the four-term recursion
/// 3(k+3)a_{k+3} + μa_{k+2} + ξ(k+2−ν/3)a_{k+1} + (k+1−ν/3)(k+2−ν/3)a_k = 0.
pub fn the_coeffs<T>(mu: T, nu: T, xi: T, k_max: usize) -> SeriesCoeffs<T>
where
    T: Num + Clone + FromPrimitive + Neg<Output = T>,
{
    let three: T = lit(3);
    let nu3 = nu.clone() / three.clone();
    let mut a: Vec<T> = Vec::with_capacity(k_max + 1);
    a.push(T::one());
    if k_max >= 1 {
        a.push(-mu.clone() / three.clone());
    }
    if k_max >= 2 {
        let a2 = (mu.clone() * mu.clone() + xi.clone() * (nu.clone() - three.clone())) / lit(18);
        a.push(a2);
    }
    for k in 0..k_max.saturating_sub(2) {
        let kk = |d: i64| -> T { lit::<T>(k as i64 + d) - nu3.clone() };
        let s = mu.clone() * a[k + 2].clone() + xi.clone() * kk(2) * a[k + 1].clone() + kk(1) * kk(2) * a[k].clone();
        a.push(-s / (three.clone() * lit(k as i64 + 3)));
    }
    SeriesCoeffs { mu, nu, xi, a }
}

impl<T> SeriesCoeffs<T>
where
    T: Num + Clone + FromPrimitive + Neg<Output = T>,
{
    /// Left side of the recursion at index k (zero when satisfied).
    pub fn residual(&self, k: usize) -> T {
        let three: T = lit(3);
        let nu3 = self.nu.clone() / three.clone();
        let kk = |d: i64| -> T { lit::<T>(k as i64 + d) - nu3.clone() };
        three * lit(k as i64 + 3) * self.a[k + 3].clone()
            + self.mu.clone() * self.a[k + 2].clone()
            + self.xi.clone() * kk(2) * self.a[k + 1].clone()
            + kk(1) * kk(2) * self.a[k].clone()
    }
}

/// Optimally truncated asymptotic value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticValue {
    pub value: C64,
    pub derivative: C64,
    /// Prefactor times the first omitted (smallest) term.
    pub error_estimate: f64,
    pub terms: usize,
    /// Terms started growing before the available coefficients ran out.
    pub diverged_early: bool,
}

fn truncated(coeffs: &[C64], w: C64, s: C64, pre: C64, dpre: C64) -> Result<AsymptoticValue, HeunError> {
    // value = pre·w^s·Σ a_k w^{−k}, derivative with respect to w
    if coeffs.is_empty() {
        return Err(HeunError::NoTerms);
    }
    let inv = w.inv();
    let mut p = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut dsum = C64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut terms = coeffs.len();
    let mut smallest = 0.0;
    let mut diverged_early = false;
    for (k, a) in coeffs.iter().enumerate() {
        let term = *a * p;
        let m = term.norm();
        if k > 1 && m > prev && prev > 0.0 {
            terms = k;
            smallest = prev;
            diverged_early = true;
            break;
        }
        if diverged_early {
            break;
        }
        sum += term;
        dsum += term * (s - k as f64) * inv;
        if m > 0.0 || k == 0 {
            prev = m;
        }
        smallest = m;
        p *= inv;
    }
    if !diverged_early {
        // the last retained term stands in for the first omitted one
        smallest = smallest.min(prev);
    }
    let ws = (s * w.ln()).exp();
    let value = pre * ws * sum;
    let derivative = dpre * ws * sum + pre * ws * dsum;
    Ok(AsymptoticValue { value, derivative, error_estimate: (pre * ws).norm() * smallest, terms, diverged_early })
}

/// T₁(μ,ν,ξ;z) = e^{−(z³+ξz)/2} z^{ν/3−1} Σ a_k z^{−k}, |arg z| < π/2.
pub fn t1_eval(coeffs: &SeriesCoeffs<C64>, z: C64, k_max: usize) -> Result<AsymptoticValue, HeunError> {
    if z.norm() == 0.0 {
        return Err(HeunError::ZeroArgument);
    }
    if z.arg().abs() >= PI / 2.0 {
        return Err(HeunError::Sector(z));
    }
    let n = (k_max + 1).min(coeffs.a.len());
    let xi = coeffs.xi;
    let pre = (-(z * z * z + xi * z) / 2.0).exp();
    let dpre = pre * (-(3.0 * z * z + xi) / 2.0);
    truncated(&coeffs.a[..n], z, coeffs.nu / 3.0 - 1.0, pre, dpre)
}

/// T₂(μ,ν,ξ;z) = e^{(z³+ξz)/2}(−z)^{−ν/3−1} Σ a_k(μ,−ν,ξ)(−z)^{−k}, |arg(−z)| < π/2.
/// `reflected` must hold the coefficients for (μ, −ν, ξ).
pub fn t2_eval(reflected: &SeriesCoeffs<C64>, z: C64, k_max: usize) -> Result<AsymptoticValue, HeunError> {
    let w = -z;
    if w.norm() == 0.0 {
        return Err(HeunError::ZeroArgument);
    }
    if w.arg().abs() >= PI / 2.0 {
        return Err(HeunError::Sector(z));
    }
    let n = (k_max + 1).min(reflected.a.len());
    let xi = reflected.xi;
    let pre = ((z * z * z + xi * z) / 2.0).exp();
    let dpre = pre * ((3.0 * z * z + xi) / 2.0);
    // chain rule: d/dz of w^s·Σ... = −d/dw
    let mut out = truncated(&reflected.a[..n], w, reflected.nu / 3.0 - 1.0, pre, -dpre)?;
    out.derivative = -out.derivative;
    Ok(out)
}

/// A₁ = (|f|/3)(β/6)^{−1/3}.
pub fn a1(params: &ModelParams) -> f64 {
    params.f.norm() / 3.0 * (params.beta / 6.0).powf(-1.0 / 3.0)
}

/// U₁ and U̇₁ at large negative t from A₁·T₁(μ,−ν,ξ;|τ|/h).
pub fn incoming_u1(params: &ModelParams, t: f64, k_max: usize) -> Result<(C64, C64), HeunError> {
    let hp = params.heun_params().map_err(DynamicsError::from)?;
    let tau = params.tau(t).map_err(DynamicsError::from)?;
    let coeffs = the_coeffs(hp.mu, -hp.nu, hp.xi, k_max);
    let w = C64::new(-tau, 0.0) / hp.h;
    let v = t1_eval(&coeffs, w, k_max)?;
    let amp = a1(params);
    // dw/dt = −1/h
    Ok((amp * v.value, -amp * v.derivative / hp.h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StokesMethod {
    NumericLimit,
}

/// Estimate of the final amplitude |A₁C(ω⁴μ,−ν,ω²ξ)|, inferred from the exact dynamics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesEstimate {
    /// Modulus: extrapolated limit of |C₁|; phase: that of the last sample.
    pub value: C64,
    pub method: StokesMethod,
    pub uncertainty: f64,
    /// Tail-corrected C₁ at t_max, 2t_max, 4t_max.
    pub samples: [C64; 3],
}

impl StokesEstimate {
    pub fn probability(&self) -> f64 {
        self.value.norm_sqr()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesOptions {
    /// Start of integration; defaults to min(−t_max, the −∞ rule).
    pub t_start: Option<f64>,
    /// Largest tolerated spread between the last two samples.
    pub max_spread: f64,
}

impl Default for StokesOptions {
    fn default() -> Self {
        Self { t_start: None, max_spread: 0.05 }
    }
}

/// Smallest t_max beyond every outgoing-side scale: 3t*, 10|f|/|α|, and the second
/// detuning zero −2α/β when it lies at positive time.
pub fn outgoing_bound(params: &ModelParams) -> f64 {
    let mut b: f64 = 0.0;
    if let Ok(tag) = params.classify_regime(0.0) {
        if tag.kind != crate::model::RegimeKind::ShortLargeRatio {
            b = b.max(3.0 * tag.t_star);
        }
    }
    if params.alpha != 0.0 {
        b = b.max(10.0 * params.f.norm() / params.alpha.abs());
    }
    if params.beta != 0.0 && params.alpha / params.beta < 0.0 {
        b = b.max(10.0 * (params.alpha / params.beta).abs());
    }
    b
}

/// Integrate from an adiabatic seed and extrapolate the tail-corrected C₁ over t_max doublings.
pub fn stokes_estimate(params: &ModelParams, t_max: f64, tol: f64) -> Result<StokesEstimate, HeunError> {
    stokes_estimate_with(params, t_max, tol, &StokesOptions::default())
}

pub fn stokes_estimate_with(params: &ModelParams, t_max: f64, tol: f64, opts: &StokesOptions) -> Result<StokesEstimate, HeunError> {
    if opts.t_start.is_none() {
        let bound = outgoing_bound(params);
        if !(t_max > bound) {
            return Err(HeunError::TooShort { t_max, bound });
        }
    }
    if params.f.norm() == 0.0 {
        let z = C64::new(0.0, 0.0);
        return Ok(StokesEstimate { value: z, method: StokesMethod::NumericLimit, uncertainty: 0.0, samples: [z; 3] });
    }
    let t0 = opts.t_start.unwrap_or(-t_max.max(-dynamics::minus_infinity(params)));
    let seed = dynamics::seed_state(params, t0).map_err(HeunError::from)?;
    let mut state: TwoLevelState = seed;
    let mut samples = [C64::new(0.0, 0.0); 3];
    for (k, s) in samples.iter_mut().enumerate() {
        let t = t_max * f64::from(1u32 << k);
        state = dynamics::integrate_coupled(params, state, t, tol)?.end();
        *s = dynamics::final_amplitude(params, &state);
    }
    // The phase of C1 keeps drifting like 1/t from the level shift |f|²/Δ, so the
    // limit is taken on the modulus. Richardson uses the observed order over the
    // doublings, floored at first order.
    let m = samples.map(|c| c.norm());
    let (d1, d2) = (m[1] - m[0], m[2] - m[1]);
    let spread = d2.abs();
    if spread > opts.max_spread {
        return Err(HeunError::NoLimit { spread });
    }
    let q = if d2 != 0.0 { (d1 / d2).max(2.0) } else { f64::INFINITY };
    let limit = if q.is_finite() { m[2] + d2 / (q - 1.0) } else { m[2] };
    let uncertainty = (limit - m[2]).abs() + spread + dynamics::adiabatic_error(params, t0) + 10.0 * tol;
    let value = C64::from_polar(limit, samples[2].arg());
    Ok(StokesEstimate { value, method: StokesMethod::NumericLimit, uncertainty, samples })
}
