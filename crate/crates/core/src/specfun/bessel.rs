use super::gamma::rgamma;
use super::{check_finite, EvalPolicy, SpecError, SpecResult};
use crate::scalar::CompensatedSum;
use crate::C64;
use std::f64::consts::PI;

/// The four orders the model needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselOrder {
    PlusSixth,
    MinusSixth,
    PlusFiveSixths,
    MinusFiveSixths,
}

impl BesselOrder {
    pub fn nu(self) -> f64 {
        match self {
            BesselOrder::PlusSixth => 1.0 / 6.0,
            BesselOrder::MinusSixth => -1.0 / 6.0,
            BesselOrder::PlusFiveSixths => 5.0 / 6.0,
            BesselOrder::MinusFiveSixths => -5.0 / 6.0,
        }
    }
}

pub fn bessel_j(order: BesselOrder, z: C64) -> SpecResult<C64> {
    bessel_j_with(order, z, &EvalPolicy::default())
}

pub fn bessel_j_with(order: BesselOrder, z: C64, policy: &EvalPolicy) -> SpecResult<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecError::Domain { func: "bessel_j", msg: "non-finite argument".into() });
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(SpecError::Domain { func: "bessel_j", msg: "negative real axis needs an explicit branch".into() });
    }
    let nu = order.nu();
    if z.norm() == 0.0 {
        return if nu > 0.0 { Ok(C64::new(0.0, 0.0)) } else { Err(SpecError::Overflow { func: "bessel_j" }) };
    }
    let v = if z.norm() < policy.bessel_radius {
        bessel_j_series(nu, z, policy.max_terms)
    } else if z.re < 0.0 {
        // J_ν(z) = e^{±iνπ} J_ν(−z) on the principal branch
        let sign = if z.im > 0.0 { 1.0 } else { -1.0 };
        C64::from_polar(1.0, sign * nu * PI) * bessel_j_asymptotic(nu, -z)
    } else {
        bessel_j_asymptotic(nu, z)
    };
    check_finite("bessel_j", v)
}

/// Ascending series (z/2)^ν Σ (−z²/4)^k / (k! Γ(ν+k+1)).
pub fn bessel_j_series(nu: f64, z: C64, max_terms: usize) -> C64 {
    let q = -z * z / 4.0;
    let mut t = rgamma(C64::new(nu + 1.0, 0.0));
    let mut s = CompensatedSum::new();
    s.add(t);
    for k in 0..max_terms {
        let kf = k as f64;
        t *= q / ((kf + 1.0) * (nu + kf + 1.0));
        s.add(t);
        if t.norm() <= 1e-18 * s.value().norm() && kf > q.norm().sqrt() {
            break;
        }
    }
    (z / 2.0).powf(nu) * s.value()
}

/// Hankel expansion √(2/πz)(P cos ω − Q sin ω), |arg z| < π.
/// Accuracy falls off near the negative real axis; `bessel_j` reflects there.
pub fn bessel_j_asymptotic(nu: f64, z: C64) -> C64 {
    let mu = 4.0 * nu * nu;
    let iz = 1.0 / z;
    let mut p = CompensatedSum::new();
    let mut q = CompensatedSum::new();
    let mut a = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..200usize {
        let term = match k % 4 {
            0 | 1 => a,
            _ => -a,
        };
        let m = term.norm();
        if k > 1 && m > last {
            break;
        }
        if k % 2 == 0 {
            p.add(term);
        } else {
            q.add(term);
        }
        if m < 1e-18 {
            break;
        }
        last = m;
        let kf = (k + 1) as f64;
        a *= (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf) * iz;
    }
    let w = z - (nu / 2.0 + 0.25) * PI;
    (2.0 / (PI * z)).sqrt() * (p.value() * w.cos() - q.value() * w.sin())
}

/// The real-line basis of y″ = −λ²τ⁴y used by the long-time regime:
/// w₁ = sgn τ √|τ| J_{1/6}(λ|τ|³/3) (odd), w₂ = √|τ| J_{−1/6}(λ|τ|³/3) (even).
/// Returns [w₁, w₁′, w₂, w₂′]; W{w₁,w₂} = −3/π.
///
/// Near the origin the entire-function series in τ is used, so complex τ
/// is accepted there; far out only real τ is supported.
pub fn bessel_basis(lambda: f64, tau: C64) -> SpecResult<[C64; 4]> {
    if !(lambda > 0.0) {
        return Err(SpecError::Domain { func: "bessel_basis", msg: "lambda must be positive".into() });
    }
    let x = lambda * tau.norm().powi(3) / 3.0;
    let policy = EvalPolicy::default();
    if x < policy.bessel_radius {
        return Ok(basis_series(lambda, tau));
    }
    if tau.im != 0.0 {
        return Err(SpecError::Domain { func: "bessel_basis", msg: "complex tau beyond the series radius".into() });
    }
    let t = tau.re.abs();
    let sg = tau.re.signum();
    let xc = C64::new(x, 0.0);
    let (j1, jm1, j5, jm5) = (
        bessel_j_asymptotic(1.0 / 6.0, xc).re,
        bessel_j_asymptotic(-1.0 / 6.0, xc).re,
        bessel_j_asymptotic(5.0 / 6.0, xc).re,
        bessel_j_asymptotic(-5.0 / 6.0, xc).re,
    );
    let st = t.sqrt();
    let d = lambda * t * t * st;
    Ok([C64::new(sg * st * j1, 0.0), C64::new(d * jm5, 0.0), C64::new(st * jm1, 0.0), C64::new(-sg * d * j5, 0.0)])
}

fn basis_series(lambda: f64, tau: C64) -> [C64; 4] {
    let l6 = lambda / 6.0;
    let t3 = tau * tau * tau;
    let q = -(l6 * t3) * (l6 * t3);
    let mut c1 = rgamma(C64::new(7.0 / 6.0, 0.0)) * l6.powf(1.0 / 6.0);
    let mut c2 = rgamma(C64::new(5.0 / 6.0, 0.0)) * l6.powf(-1.0 / 6.0);
    let mut w1 = CompensatedSum::new();
    let mut w1p = CompensatedSum::new();
    let mut w2 = CompensatedSum::new();
    let mut w2p = CompensatedSum::new();
    for k in 0..400usize {
        let kf = k as f64;
        w1.add(c1 * tau);
        w1p.add(c1 * (6.0 * kf + 1.0));
        w2.add(c2);
        w2p.add(c2 * (6.0 * kf));
        c1 *= q / ((kf + 1.0) * (kf + 7.0 / 6.0));
        c2 *= q / ((kf + 1.0) * (kf + 5.0 / 6.0));
        if c1.norm().max(c2.norm()) <= 1e-18 * (w1p.value().norm() + w2.value().norm()) && kf > q.norm().sqrt() {
            break;
        }
    }
    // d/dτ of a q^k term is 6k/τ times the term
    let w2p_val = if tau.norm() == 0.0 { C64::new(0.0, 0.0) } else { w2p.value() / tau };
    [w1.value(), w1p.value(), w2.value(), w2p_val]
}
