//! Physical parameters, coordinate maps and regime classification.

use crate::C64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("beta = 0 is the Landau-Zener limit; this operation needs a parabolic chirp")]
    ZeroBeta,
    #[error("alpha = 0 has no linear-crossing coordinate")]
    ZeroAlpha,
    #[error("lambda = beta/4 < 0: the Heun scale h is only defined for lambda > 0")]
    NegativeLambda,
    #[error("parameter {0} is not finite")]
    NonFinite(&'static str),
}

/// Rabi frequency `f`, linear chirp `alpha` and parabolic chirp `beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub f: C64,
    pub alpha: f64,
    pub beta: f64,
}

impl ModelParams {
    pub fn new(f: C64, alpha: f64, beta: f64) -> Result<Self, ModelError> {
        if !(f.re.is_finite() && f.im.is_finite()) {
            return Err(ModelError::NonFinite("f"));
        }
        if !alpha.is_finite() {
            return Err(ModelError::NonFinite("alpha"));
        }
        if !beta.is_finite() {
            return Err(ModelError::NonFinite("beta"));
        }
        Ok(Self { f, alpha, beta })
    }

    /// Real-coupling shorthand.
    pub fn real(f: f64, alpha: f64, beta: f64) -> Self {
        Self { f: C64::new(f, 0.0), alpha, beta }
    }

    pub fn f_abs2(&self) -> f64 {
        self.f.norm_sqr()
    }

    /// λ = β/4.
    pub fn lambda(&self) -> f64 {
        self.beta / 4.0
    }

    /// α/β, the shift from t to τ = t + α/β.
    pub fn tau_offset(&self) -> Result<f64, ModelError> {
        if self.beta == 0.0 {
            return Err(ModelError::ZeroBeta);
        }
        Ok(self.alpha / self.beta)
    }

    pub fn tau(&self, t: f64) -> Result<f64, ModelError> {
        Ok(t + self.tau_offset()?)
    }

    /// Δ(t) = αt + βt²/2.
    pub fn detuning(&self, t: f64) -> f64 {
        self.alpha * t + 0.5 * self.beta * t * t
    }

    /// Φ(t) = ∫Δ = αt²/2 + βt³/6.
    pub fn phase(&self, t: f64) -> f64 {
        t * t * (0.5 * self.alpha + self.beta * t / 6.0)
    }

    /// |f|² + α⁴/(16β²): the constant of the τ-form, equal to α times the
    /// short-time γ. Finite at α = 0.
    pub fn k_const(&self) -> Result<f64, ModelError> {
        if self.beta == 0.0 {
            return Err(ModelError::ZeroBeta);
        }
        Ok(self.f_abs2() + self.alpha.powi(4) / (16.0 * self.beta * self.beta))
    }

    /// Landau-Zener γ = |f|²/α. Not the short-time γ = k_const/α.
    pub fn gamma_lz(&self) -> Result<f64, ModelError> {
        if self.alpha == 0.0 {
            return Err(ModelError::ZeroAlpha);
        }
        Ok(self.f_abs2() / self.alpha)
    }

    /// J(t) in U₁″ + J U₁ = 0: |f|² − iΔ′/2 + Δ²/4.
    pub fn u1_coefficient(&self, t: f64) -> C64 {
        let d = self.detuning(t);
        C64::new(self.f_abs2() + 0.25 * d * d, -0.5 * (self.alpha + self.beta * t))
    }

    /// (iβ/2)^{1/3} on the branch e^{±iπ/6}(|β|/2)^{1/3}, sign following β.
    pub fn airy_scale(&self) -> Result<C64, ModelError> {
        if self.beta == 0.0 {
            return Err(ModelError::ZeroBeta);
        }
        let ang = PI / 6.0 * self.beta.signum();
        Ok(C64::from_polar((self.beta.abs() / 2.0).cbrt(), ang))
    }

    /// z = (iβ/2)^{1/3}(τ + 2iK/β), the Airy-regime variable.
    pub fn airy_z(&self, t: f64) -> Result<C64, ModelError> {
        let c = self.airy_scale()?;
        let tau = self.tau(t)?;
        Ok(c * C64::new(tau, 2.0 * self.k_const()? / self.beta))
    }

    /// dz/dt in the parabolic-cylinder regime: e^{∓iπ/4}|α|^{1/2} for α ≷ 0.
    pub fn pcf_scale(&self) -> Result<C64, ModelError> {
        if self.alpha == 0.0 {
            return Err(ModelError::ZeroAlpha);
        }
        Ok(C64::from_polar(self.alpha.abs().sqrt(), -PI / 4.0 * self.alpha.signum()))
    }

    pub fn pcf_z(&self, t: f64) -> Result<C64, ModelError> {
        Ok(self.pcf_scale()? * t)
    }

    /// Regime boundary and basis choice at time `t`.
    pub fn classify_regime(&self, t: f64) -> Result<RegimeTag, ModelError> {
        if self.beta == 0.0 {
            return Err(ModelError::ZeroBeta);
        }
        let threshold = 2f64.sqrt() * self.beta.abs().powf(2.0 / 3.0);
        if self.alpha.abs() > threshold {
            let t_star = (self.alpha / self.beta).abs();
            let kind = if t.abs() <= t_star { RegimeKind::ShortLargeRatio } else { RegimeKind::Long };
            Ok(RegimeTag { kind, t_star })
        } else {
            let t_star = 2.0 * self.beta.abs().powf(-1.0 / 3.0);
            let kind = if self.tau(t)?.abs() <= t_star { RegimeKind::ShortSmallRatio } else { RegimeKind::Long };
            Ok(RegimeTag { kind, t_star })
        }
    }

    /// Canonical tri-confluent Heun parameters.
    pub fn heun_params(&self) -> Result<HeunParams, ModelError> {
        if self.beta == 0.0 {
            return Err(ModelError::ZeroBeta);
        }
        let lambda = self.lambda();
        if lambda < 0.0 {
            return Err(ModelError::NegativeLambda);
        }
        let h = C64::from_polar((1.5 / lambda).cbrt(), PI / 6.0);
        let r = self.alpha / self.beta;
        let xi = -3.0 * r * r / (h * h);
        let mu = self.k_const()? * h * h + xi * xi / 4.0;
        Ok(HeunParams { mu, nu: C64::new(3.0, 0.0), xi, h, omega: C64::from_polar(1.0, PI / 3.0) })
    }
}

/// (μ, ν, ξ, h, ω) with τ = h z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeunParams {
    pub mu: C64,
    pub nu: C64,
    pub xi: C64,
    pub h: C64,
    pub omega: C64,
}

impl HeunParams {
    /// J rebuilt from the canonical form: h⁻²(μ − ξ²/4 + νz − (3/2)ξz² − (9/4)z⁴), z = τ/h.
    pub fn coefficient(&self, tau: C64) -> C64 {
        let z = tau / self.h;
        let z2 = z * z;
        (self.mu - self.xi * self.xi / 4.0 + self.nu * z - 1.5 * self.xi * z2 - 2.25 * z2 * z2) / (self.h * self.h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeKind {
    /// |α| small against β^{2/3}, |τ| ≤ t*: Airy basis.
    ShortSmallRatio,
    /// |α| large against β^{2/3}, |t| ≤ t*: parabolic-cylinder basis.
    ShortLargeRatio,
    /// Outside t*: Bessel basis.
    Long,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeTag {
    pub kind: RegimeKind,
    pub t_star: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detuning_values() {
        assert_eq!(ModelParams::real(1.0, 0.2, 2.0).detuning(0.0), 0.0);
        assert!((ModelParams::real(1.0, 0.2, 2.0).detuning(1.0) - 1.2).abs() < 1e-15);
        assert_eq!(ModelParams::real(1.0, 2.0, 0.0).detuning(3.0), 6.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ModelParams::new(C64::new(f64::NAN, 0.0), 0.0, 1.0).is_err());
        assert_eq!(ModelParams::real(1.0, 1.0, 0.0).heun_params(), Err(ModelError::ZeroBeta));
        assert_eq!(ModelParams::real(1.0, 1.0, -2.0).heun_params(), Err(ModelError::NegativeLambda));
        assert_eq!(ModelParams::real(1.0, 0.0, 2.0).pcf_z(1.0), Err(ModelError::ZeroAlpha));
    }
}
