//! Complex special functions: Airy, Bessel J of orders ±1/6 and ±5/6,
//! parabolic cylinder U(a,z) / D_n(z), ₂F₃ and erfc.

mod airy;
mod bessel;
mod dd;
mod erfc;
mod gamma;
mod hyp;
mod pcf;
mod taylor;

pub use airy::{airy, airy_asymptotic, airy_maclaurin, airy_with, AiryKind};
pub use bessel::{bessel_basis, bessel_j, bessel_j_asymptotic, bessel_j_series, bessel_j_with, BesselOrder};
pub use erfc::erfc;
pub use gamma::{digamma, gamma, ln_gamma, rgamma};
pub use hyp::{hyp2f3, hyp2f3_asymptotic, hyp2f3_series, hyp2f3_sixths, hyp2f3_with};
pub use pcf::{pcf, pcf_d, pcf_u, pcf_u_asymptotic, pcf_u_sided, pcf_u_with, PcfKind, Side};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("{func}: result overflows")]
    Overflow { func: &'static str },
    #[error("{func}: {msg}")]
    Domain { func: &'static str, msg: String },
    #[error("{func}: argument lies on a Stokes line, specify a side")]
    StokesLine { func: &'static str },
    #[error("{func}: no convergence within {terms} terms")]
    NonConvergence { func: &'static str, terms: usize },
}

pub type SpecResult<T> = Result<T, SpecError>;

/// Evaluation knobs. Radii are in the natural argument of each family.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPolicy {
    /// Relative size below which a series term ends the summation.
    pub series_tol: f64,
    pub airy_radius: f64,
    pub bessel_radius: f64,
    pub pcf_radius: f64,
    pub hyp_radius: f64,
    pub erfc_radius: f64,
    pub max_terms: usize,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            series_tol: 1e-17,
            airy_radius: 7.5,
            bessel_radius: 12.0,
            pcf_radius: 8.0,
            hyp_radius: 400.0,
            erfc_radius: 2.0,
            max_terms: 4000,
        }
    }
}

/// Cancellation factor above which a Maclaurin sum is distrusted.
pub(crate) const MAX_LOSS: f64 = 1e5;

pub(crate) fn check_finite(func: &'static str, v: crate::C64) -> SpecResult<crate::C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(SpecError::Overflow { func })
    }
}
