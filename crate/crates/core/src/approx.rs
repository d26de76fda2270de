//! Regime-local approximations U₁ ≈ (1 − G′/2)Ū + GŪ′ over a homogeneous basis
//! Ū″ = q Ū, and the Landau-Zener probability.
//!
//! With the full equation U″ = (q + π)U and G″′ − 4qG′ − 2q′G = −2π, the corrected
//! form satisfies the full equation up to O(π²).

use crate::dynamics::U1State;
use crate::identities::{Family, IdentityError, Rn};

use crate::model::{ModelError, ModelParams};
use crate::specfun::SpecError;
use crate::C64;
use thiserror::Error;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error("matching system is singular (determinant {0:e})")]
    Singular(f64),
    #[error("interval [{0}, {1}] is empty")]
    EmptyInterval(f64, f64),
    #[error("Bessel interval must not contain tau = 0")]
    CrossesOrigin,
}

/// Which quartic G to use in the Airy regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GForm {
    /// Rederived from the perturbation in z: prefactor 1/4, constant α⁴/(16β²c²).
    Derived,
    /// Prefactor (iβ/2)^{2/3}/4 and constant α⁴/(16β²).
    Printed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryOptions {
    pub form: GForm,
    pub include_constant: bool,
}

impl Default for AiryOptions {
    fn default() -> Self {
        Self { form: GForm::Derived, include_constant: true }
    }
}

/// z± = (iβ/2)^{1/3}(2iK/β ± α/β), a = z₊ + z₋, b = z₊z₋, with K = α·γ_short
/// = |f|² + α⁴/(16β²) so that α = 0 stays finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryRegimeParams {
    pub z_plus: C64,
    pub z_minus: C64,
    pub a: C64,
    pub b: C64,
    pub alpha_gamma: f64,
    pub scale: C64,
}

impl AiryRegimeParams {
    pub fn new(params: &ModelParams) -> Result<Self, ApproxError> {
        let c = params.airy_scale()?;
        let k = params.k_const()?;
        let (al, be) = (params.alpha, params.beta);
        let base = c * C64::new(0.0, 2.0 * k / be);
        let z_plus = base + c * (al / be);
        let z_minus = base - c * (al / be);
        Ok(Self { z_plus, z_minus, a: z_plus + z_minus, b: z_plus * z_minus, alpha_gamma: k, scale: c })
    }

    /// π₄(z) = ¼[(z−z₊)(z−z₋)]² + c⁻²α⁴/(16β²), using α⁴/(16β²) = K − |f|².
    pub fn pi4(&self, z: C64, f_abs2: f64) -> C64 {
        let p = (z - self.z_plus) * (z - self.z_minus);
        p * p / 4.0 + (self.alpha_gamma - f_abs2) / (self.scale * self.scale)
    }
}

/// a = −i|f|²/α − ½, z* = e^{−iπ/4}α^{3/2}/β (α > 0) or −e^{iπ/4}|α|^{3/2}/β (α < 0),
/// γ_LZ = |f|²/α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PcfRegimeParams {
    pub a: C64,
    /// `None` when β = 0 (no correction).
    pub z_star: Option<C64>,
    pub gamma_lz: f64,
}

impl PcfRegimeParams {
    pub fn new(params: &ModelParams) -> Result<Self, ApproxError> {
        let al = params.alpha;
        if al == 0.0 {
            return Err(ModelError::ZeroAlpha.into());
        }
        let f2 = params.f_abs2();
        let a = C64::new(-0.5, -f2 / al);
        let z_star = if params.beta == 0.0 {
            None
        } else {
            let m = al.abs().powf(1.5) / params.beta;
            Some(if al > 0.0 { C64::from_polar(m, -std::f64::consts::FRAC_PI_4) } else { -C64::from_polar(m, std::f64::consts::FRAC_PI_4) })
        };
        Ok(Self { a, z_star, gamma_lz: f2 / al })
    }
}

/// Homogeneous basis of a regime, expressed in its own variable x = s·t + x₀.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Basis {
    /// (Ai(z), Bi(z)), z = c(τ + 2iK/β).
    Airy,
    /// (U(a,z), U(−a,∓iz)) for α ≷ 0.
    Pcf { a: C64, z_star: Option<C64>, upper: bool },
    /// (w₁(τ), w₂(τ)).
    Bessel { lambda: f64 },
}

impl Basis {
    /// [y₁, y₁′, y₂, y₂′] in x.
    pub fn eval(&self, x: C64) -> Result<[C64; 4], ApproxError> {
        match *self {
            Basis::Airy => Ok(Family::Airy.pair(x)?),
            Basis::Pcf { a, upper, .. } => {
                let rot = if upper { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) };
                let (u1, u1p) = crate::specfun::pcf_u(a, x)?;
                let (u2, u2p) = crate::specfun::pcf_u(-a, rot * x)?;
                Ok([u1, u1p, u2, rot * u2p])
            }
            Basis::Bessel { lambda } => Ok(Family::Bessel { lambda }.pair(x)?),
        }
    }

    /// q(x) in y″ = q y.
    pub fn q(&self, x: C64) -> C64 {
        match *self {
            Basis::Airy => x,
            Basis::Pcf { a, .. } => a + x * x / 4.0,
            Basis::Bessel { lambda } => -lambda * lambda * x.powu(4),
        }
    }

    /// W{y₁, y₂} in x.
    pub fn wronskian(&self) -> C64 {
        match *self {
            Basis::Airy => Family::Airy.wronskian(),
            Basis::Pcf { a, upper, .. } => {
                let s = if upper { 1.0 } else { -1.0 };
                s * I * (C64::new(0.0, -s * std::f64::consts::PI) * (a / 2.0 + 0.25)).exp()
            }
            Basis::Bessel { lambda } => Family::Bessel { lambda }.wronskian(),
        }
    }
}

/// First-order correction G and its derivatives in the basis variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Correction {
    None,
    /// G = −Σ pₙRₙ for a perturbation π = Σ pₙxⁿ of q, n = 0..=5,
    /// replaced by a far-field tail when one is given and |x| reaches it.
    Series {
        family: Family,
        p: [C64; 6],
        far: Option<FarField>,
    },
    /// Printed Airy quartic: s·[z⁴/9 − 2az³/7 + (a²+2b)z²/5 + (4/9 − 2ab/3)z + b² − 6a/7] + k₀.
    AiryPrinted {
        a: C64,
        b: C64,
        s: C64,
        k0: C64,
    },
}

/// G ≈ coeff/x for |x| ≥ x_min.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FarField {
    pub x_min: f64,
    pub coeff: C64,
}

impl Correction {
    /// [G, G′, G″].
    pub fn eval(&self, x: C64) -> Result<[C64; 3], ApproxError> {
        let zero = C64::new(0.0, 0.0);
        Ok(match *self {
            Correction::None => [zero; 3],
            Correction::Series { far: Some(FarField { x_min, coeff }), .. } if x.norm() >= x_min => {
                let g = coeff / x;
                [g, -g / x, 2.0 * g / (x * x)]
            }
            Correction::Series { family, p, .. } => {
                let mut out = [zero; 3];
                for (n, pn) in p.iter().enumerate() {
                    if *pn == zero {
                        continue;
                    }
                    let r = Rn::new(family, n as u32)?.eval(x)?;
                    for j in 0..3 {
                        out[j] -= *pn * r[j];
                    }
                }
                out
            }
            Correction::AiryPrinted { a, b, s, k0 } => {
                let c4 = C64::new(1.0 / 9.0, 0.0);
                let c3 = -2.0 * a / 7.0;
                let c2 = (a * a + 2.0 * b) / 5.0;
                let c1 = 4.0 / 9.0 - 2.0 * a * b / 3.0;
                let c0 = b * b - 6.0 * a / 7.0;
                let g = (((c4 * x + c3) * x + c2) * x + c1) * x + c0;
                let gp = ((4.0 * c4 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
                let gpp = (12.0 * c4 * x + 6.0 * c3) * x + 2.0 * c2;
                [s * g + k0, s * gp, s * gpp]
            }
        })
    }

    /// The perturbation π(x) a `Series` correction is built for.
    pub fn perturbation(&self, x: C64) -> Option<C64> {
        match self {
            Correction::Series { p, .. } => Some(p.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c)),
            _ => None,
        }
    }
}

/// Airy-regime perturbation coefficients of π₄ = ¼(z² − az + b)² + k.
pub fn airy_perturbation(rp: &AiryRegimeParams, k: C64) -> [C64; 6] {
    let (a, b) = (rp.a, rp.b);
    let zero = C64::new(0.0, 0.0);
    [b * b / 4.0 + k, -a * b / 2.0, (a * a + 2.0 * b) / 4.0, -a / 2.0, C64::new(0.25, 0.0), zero]
}

/// Parabolic-cylinder perturbation π₃ = −z/(2z*) + z³/(4z*).
pub fn pcf_perturbation(z_star: C64) -> [C64; 6] {
    let zero = C64::new(0.0, 0.0);
    [zero, -0.5 / z_star, zero, 0.25 / z_star, zero, zero]
}

/// Bessel-regime perturbation −K + (iβ/2)τ + (α²/8)τ².
pub fn bessel_perturbation(params: &ModelParams) -> Result<[C64; 6], ApproxError> {
    let zero = C64::new(0.0, 0.0);
    Ok([C64::new(-params.k_const()?, 0.0), I * params.beta / 2.0, C64::new(params.alpha * params.alpha / 8.0, 0.0), zero, zero, zero])
}

/// Bessel-regime G at τ: ₂F₃ inside the asymptotic radius, the tail beyond.
pub fn bessel_g(params: &ModelParams, tau: f64) -> Result<C64, ApproxError> {
    let lambda = params.lambda().abs();
    let corr =
        Correction::Series { family: Family::Bessel { lambda }, p: bessel_perturbation(params)?, far: Some(bessel_far_field(params)) };
    Ok(corr.eval(C64::new(tau, 0.0))?[0])
}

/// Far-field asymptote of the Bessel-regime G: −α²/(β²τ).
/// Tail used beyond the ₂F₃ asymptotic radius |λτ³/3|² = 400.
pub fn bessel_far_field(params: &ModelParams) -> FarField {
    let lambda = params.lambda().abs();
    FarField { x_min: (60.0 / lambda).cbrt(), coeff: C64::new(-params.alpha * params.alpha / (params.beta * params.beta), 0.0) }
}

pub fn bessel_g_far(params: &ModelParams, tau: f64) -> f64 {
    -params.alpha * params.alpha / (params.beta * params.beta * tau)
}

/// A regime basis with fitted coefficients and optional correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalSolution {
    pub basis: Basis,
    pub c1: C64,
    pub c2: C64,
    pub interval: (f64, f64),
    pub correction: Correction,
    /// x = scale·t + shift.
    pub scale: C64,
    pub shift: C64,
}

impl LocalSolution {
    pub fn corrected(&self) -> bool {
        self.correction != Correction::None
    }

    pub fn x(&self, t: f64) -> C64 {
        self.scale * t + self.shift
    }

    /// (U, dU/dt) of each basis function k = 0, 1 through the corrected form.
    fn columns(&self, t: f64) -> Result<[(C64, C64); 2], ApproxError> {
        let x = self.x(t);
        let y = self.basis.eval(x)?;
        let [g, gp, gpp] = self.correction.eval(x)?;
        let q = self.basis.q(x);
        let col = |v: C64, d: C64| {
            let u = (1.0 - gp / 2.0) * v + g * d;
            let ux = (1.0 + gp / 2.0) * d + (g * q - gpp / 2.0) * v;
            (u, self.scale * ux)
        };
        Ok([col(y[0], y[1]), col(y[2], y[3])])
    }

    /// U₁ and U̇₁ at t.
    pub fn eval(&self, t: f64) -> Result<(C64, C64), ApproxError> {
        let [a, b] = self.columns(t)?;
        Ok((self.c1 * a.0 + self.c2 * b.0, self.c1 * a.1 + self.c2 * b.1))
    }

    pub fn probability(&self, t: f64) -> Result<f64, ApproxError> {
        Ok(self.eval(t)?.0.norm_sqr())
    }

    /// Fix (c₁, c₂) so that value and derivative equal `(u, udot)` at t.
    ///
    /// Homogeneous segments use the Wronskian directly: the determinant is
    /// scale·W. Corrected ones solve the 2×2 system by Cramer's rule.
    pub fn fit(&mut self, t: f64, u: C64, udot: C64) -> Result<(), ApproxError> {
        let [a, b] = self.columns(t)?;
        let det = a.0 * b.1 - b.0 * a.1;
        let scale = (a.0.norm() + a.1.norm()) * (b.0.norm() + b.1.norm());
        if !(det.norm() > 1e-14 * scale.max(f64::MIN_POSITIVE)) {
            return Err(ApproxError::Singular(det.norm()));
        }
        self.c1 = (u * b.1 - udot * b.0) / det;
        self.c2 = (udot * a.0 - u * a.1) / det;
        Ok(())
    }
}

fn check_interval(interval: (f64, f64)) -> Result<(), ApproxError> {
    if interval.0 < interval.1 {
        Ok(())
    } else {
        Err(ApproxError::EmptyInterval(interval.0, interval.1))
    }
}

/// Unfitted Airy-regime solution (c₁ = c₂ = 0).
pub fn airy_local(params: &ModelParams, interval: (f64, f64), corrected: bool, opts: AiryOptions) -> Result<LocalSolution, ApproxError> {
    check_interval(interval)?;
    let rp = AiryRegimeParams::new(params)?;
    let c = rp.scale;
    let tau0 = params.tau_offset()?;
    let shift = c * C64::new(tau0, 2.0 * rp.alpha_gamma / params.beta);
    let correction = if corrected {
        let k0_raw = params.alpha.powi(4) / (16.0 * params.beta * params.beta);
        let keep = if opts.include_constant { 1.0 } else { 0.0 };
        match opts.form {
            GForm::Derived => Correction::Series { family: Family::Airy, p: airy_perturbation(&rp, keep * k0_raw / (c * c)), far: None },
            GForm::Printed => Correction::AiryPrinted { a: rp.a, b: rp.b, s: c * c / 4.0, k0: C64::new(keep * k0_raw, 0.0) },
        }
    } else {
        Correction::None
    };
    Ok(LocalSolution { basis: Basis::Airy, c1: C64::new(0.0, 0.0), c2: C64::new(0.0, 0.0), interval, correction, scale: c, shift })
}

/// Airy-regime approximation matched to `init` at its time.
pub fn airy_approx(
    params: &ModelParams,
    interval: (f64, f64),
    init: U1State,
    corrected: bool,
    opts: AiryOptions,
) -> Result<LocalSolution, ApproxError> {
    let mut s = airy_local(params, interval, corrected, opts)?;
    s.fit(init.t, init.u1, init.u1dot)?;
    Ok(s)
}

/// Parabolic-cylinder approximation matched to `init`. The correction exists for β ≠ 0
/// but does not improve on the homogeneous form.
pub fn pcf_approx(params: &ModelParams, interval: (f64, f64), init: U1State, corrected: bool) -> Result<LocalSolution, ApproxError> {
    check_interval(interval)?;
    let rp = PcfRegimeParams::new(params)?;
    let scale = params.pcf_scale()?;
    let correction = match (corrected, rp.z_star) {
        (true, Some(z_star)) => Correction::Series { family: Family::Pcf { a: rp.a }, p: pcf_perturbation(z_star), far: None },
        _ => Correction::None,
    };
    let basis = Basis::Pcf { a: rp.a, z_star: rp.z_star, upper: params.alpha > 0.0 };
    let mut s =
        LocalSolution { basis, c1: C64::new(0.0, 0.0), c2: C64::new(0.0, 0.0), interval, correction, scale, shift: C64::new(0.0, 0.0) };
    s.fit(init.t, init.u1, init.u1dot)?;
    Ok(s)
}

/// Unfitted Bessel-regime solution in τ = t + α/β.
pub fn bessel_local(params: &ModelParams, interval: (f64, f64), corrected: bool) -> Result<LocalSolution, ApproxError> {
    check_interval(interval)?;
    let tau0 = params.tau_offset()?;
    let lambda = params.lambda().abs();
    let correction = if corrected {
        Correction::Series { family: Family::Bessel { lambda }, p: bessel_perturbation(params)?, far: Some(bessel_far_field(params)) }
    } else {
        Correction::None
    };
    Ok(LocalSolution {
        basis: Basis::Bessel { lambda },
        c1: C64::new(0.0, 0.0),
        c2: C64::new(0.0, 0.0),
        interval,
        correction,
        scale: C64::new(1.0, 0.0),
        shift: C64::new(tau0, 0.0),
    })
}

/// Bessel-regime approximation matched to `init`; the τ-interval must not contain 0.
pub fn bessel_approx(params: &ModelParams, interval: (f64, f64), init: U1State, corrected: bool) -> Result<LocalSolution, ApproxError> {
    let tau0 = params.tau_offset()?;
    let (a, b) = (interval.0 + tau0, interval.1 + tau0);
    if a <= 0.0 && b >= 0.0 {
        return Err(ApproxError::CrossesOrigin);
    }
    let mut s = bessel_local(params, interval, corrected)?;
    s.fit(init.t, init.u1, init.u1dot)?;
    Ok(s)
}

/// 1 − e^{−2π|γ|}.
pub fn lz_probability(gamma_lz: f64) -> f64 {
    -(-2.0 * std::f64::consts::PI * gamma_lz.abs()).exp_m1()
}
