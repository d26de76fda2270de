//! Closed-form integrals of zⁿ·(products of solutions of y″ = f y) for the Airy,
//! parabolic-cylinder and quartic-Bessel families.
//!
//! For R with R‴ − 4fR′ − 2f′R = 2zⁿ, P = R″/2 − fR and Q = −R′,
//! d/dz [P y² + Q y y′ + R y′²] = zⁿ y² for every solution y.

use crate::quad::{self, QuadError};
use crate::specfun::{airy, bessel_basis, hyp2f3_sixths, pcf_u, AiryKind, SpecError};
use crate::C64;
use std::cell::RefCell;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("no closed form for n = {n} in the {family} family")]
    Unsupported { family: &'static str, n: u32 },
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

pub type IdResult<T> = Result<T, IdentityError>;

/// y″ = f(z) y with f = z, a + z²/4, or −λ²τ⁴.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Airy,
    Pcf { a: C64 },
    Bessel { lambda: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Airy => "Airy",
            Family::Pcf { .. } => "parabolic-cylinder",
            Family::Bessel { .. } => "Bessel",
        }
    }

    /// f(z) and f′(z).
    pub fn coefficient(&self, z: C64) -> (C64, C64) {
        match *self {
            Family::Airy => (z, C64::new(1.0, 0.0)),
            Family::Pcf { a } => (a + z * z / 4.0, z / 2.0),
            Family::Bessel { lambda } => {
                let l2 = lambda * lambda;
                let z3 = z * z * z;
                (-l2 * z3 * z, -4.0 * l2 * z3)
            }
        }
    }

    /// Supported n.
    pub fn supports(&self, n: u32) -> bool {
        match self {
            Family::Airy => n <= 4,
            Family::Pcf { .. } => n == 1 || n == 3,
            Family::Bessel { .. } => n <= 5,
        }
    }

    /// Standard pair [y₁, y₁′, y₂, y₂′]: (Ai, Bi), (U(a,z), U(−a,−iz)), (w₁, w₂).
    pub fn pair(&self, z: C64) -> IdResult<[C64; 4]> {
        match *self {
            Family::Airy => Ok([airy(AiryKind::Ai, z)?, airy(AiryKind::AiPrime, z)?, airy(AiryKind::Bi, z)?, airy(AiryKind::BiPrime, z)?]),
            Family::Pcf { a } => {
                let mi = C64::new(0.0, -1.0);
                let (u1, u1p) = pcf_u(a, z)?;
                let (u2, u2p) = pcf_u(-a, mi * z)?;
                Ok([u1, u1p, u2, mi * u2p])
            }
            Family::Bessel { lambda } => {
                if lambda == 0.0 {
                    return Err(IdentityError::ZeroLambda);
                }
                Ok(bessel_basis(lambda.abs(), z)?)
            }
        }
    }

    /// W{y₁, y₂} of the standard pair: 1/π, i e^{−iπ(a/2+1/4)}, −3/π.
    pub fn wronskian(&self) -> C64 {
        match *self {
            Family::Airy => C64::new(1.0 / PI, 0.0),
            Family::Pcf { a } => C64::new(0.0, 1.0) * (C64::new(0.0, -PI) * (a / 2.0 + 0.25)).exp(),
            Family::Bessel { .. } => C64::new(-3.0 / PI, 0.0),
        }
    }
}

/// R_n with its first two derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rn {
    pub family: Family,
    pub n: u32,
}

impl Rn {
    pub fn new(family: Family, n: u32) -> IdResult<Self> {
        if !family.supports(n) {
            return Err(IdentityError::Unsupported { family: family.name(), n });
        }
        if let Family::Bessel { lambda } = family {
            if lambda == 0.0 {
                return Err(IdentityError::ZeroLambda);
            }
        }
        Ok(Self { family, n })
    }

    /// [R, R′, R″] at z.
    pub fn eval(&self, z: C64) -> IdResult<[C64; 3]> {
        let n = self.n;
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        Ok(match self.family {
            Family::Airy => airy_rn(n, z),
            Family::Pcf { a } => match n {
                1 => [C64::new(-2.0, 0.0), zero, zero],
                _ => [(16.0 * a - 2.0 * z * z) / 3.0, -4.0 * z / 3.0, C64::new(-4.0 / 3.0, 0.0)],
            },
            Family::Bessel { lambda } => {
                let l2 = lambda * lambda;
                match n {
                    0..=2 => bessel_rn(n, lambda, z)?,
                    3 => [one / (4.0 * l2), zero, zero],
                    4 => [z / (6.0 * l2), one / (6.0 * l2), zero],
                    _ => [z * z / (8.0 * l2), z / (4.0 * l2), one / (4.0 * l2)],
                }
            }
        })
    }

    /// P, Q, R of the closed integral.
    pub fn pqr(&self, z: C64) -> IdResult<[C64; 3]> {
        let [r, rp, rpp] = self.eval(z)?;
        let (f, _) = self.family.coefficient(z);
        Ok([rpp / 2.0 - f * r, -rp, r])
    }
}

/// Airy R_n, with R_n = [n(n−1)(n−2)R_{n−3} − 2zⁿ]/(2(2n+1)) above the listed range.
fn airy_rn(n: u32, z: C64) -> [C64; 3] {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match n {
        0 => [-one, zero, zero],
        1 => [-z / 3.0, -one / 3.0, zero],
        2 => [-z * z / 5.0, -2.0 * z / 5.0, -one * 0.4],
        _ => {
            let nf = n as f64;
            let [r, rp, rpp] = airy_rn(n - 3, z);
            let c = nf * (nf - 1.0) * (nf - 2.0);
            let d = 2.0 * (2.0 * nf + 1.0);
            let zn = z.powu(n);
            let zn1 = z.powu(n - 1);
            let zn2 = z.powu(n - 2);
            [(c * r - 2.0 * zn) / d, (c * rp - 2.0 * nf * zn1) / d, (c * rpp - 2.0 * nf * (nf - 1.0) * zn2) / d]
        }
    }
}

/// Airy R_n for any n ≥ 0 via the three-step recursion.
pub fn airy_rn_any(n: u32, z: C64) -> [C64; 3] {
    airy_rn(n, z)
}

/// Bessel-family R₀, R₁, R₂ and their derivatives from ₂F₃ with X = −(λτ³/3)²:
/// R_n = 2τ^{n+3}₂F₃(1,(n+5)/6;(n+7)/6,(n+8)/6,(n+9)/6;X)/((n+1)(n+2)(n+3)).
pub fn bessel_rn_2f3(n: u32, lambda: f64, tau: C64) -> IdResult<C64> {
    if lambda == 0.0 {
        return Err(IdentityError::ZeroLambda);
    }
    if n > 2 {
        return Err(IdentityError::Unsupported { family: "Bessel (2F3)", n });
    }
    Ok(bessel_rn(n, lambda, tau)?[0])
}

fn bessel_rn(n: u32, lambda: f64, tau: C64) -> Result<[C64; 3], SpecError> {
    let k = n as i32;
    let nf = n as f64;
    let t3 = tau * tau * tau;
    let x = -(lambda * t3 / 3.0) * (lambda * t3 / 3.0);
    let r = 2.0 * tau.powu(n + 3) * hyp2f3_sixths([6, k + 5], [k + 7, k + 8, k + 9], x)? / ((nf + 1.0) * (nf + 2.0) * (nf + 3.0));
    let rp = 2.0 * tau.powu(n + 2) * hyp2f3_sixths([6, k + 5], [k + 3, k + 7, k + 8], x)? / ((nf + 1.0) * (nf + 2.0));
    let rpp = 2.0 * tau.powu(n + 1) * hyp2f3_sixths([6, k + 5], [k + 3, k + 7, k + 2], x)? / (nf + 1.0);
    Ok([r, rp, rpp])
}

/// Far-field forms: R₀ ≈ √3/(6³π)(3/λ)^{5/3}Γ(1/3)Γ(1/6)²τ^{−2}[1 + cos(2λτ³/3 − 5π/6)/√3],
/// R₂ ≈ 1/(2λ²τ) = 8/(β²τ).
pub fn bessel_r0_far(lambda: f64, tau: f64) -> f64 {
    use crate::specfun::gamma;
    let g3 = gamma(C64::new(1.0 / 3.0, 0.0)).re;
    let g6 = gamma(C64::new(1.0 / 6.0, 0.0)).re;
    3f64.sqrt() / (216.0 * PI) * (3.0 / lambda).powf(5.0 / 3.0) * g3 * g6 * g6 / (tau * tau)
        * (1.0 + (2.0 / 3.0 * lambda * tau.powi(3) - 5.0 * PI / 6.0).cos() / 3f64.sqrt())
}

pub fn bessel_r2_far(lambda: f64, tau: f64) -> f64 {
    1.0 / (2.0 * lambda * lambda * tau)
}

/// A solution y = c₁y₁ + c₂y₂ of the family's standard pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mix {
    pub c1: C64,
    pub c2: C64,
}

impl Mix {
    pub const FIRST: Mix = Mix { c1: C64 { re: 1.0, im: 0.0 }, c2: C64 { re: 0.0, im: 0.0 } };
    pub const SECOND: Mix = Mix { c1: C64 { re: 0.0, im: 0.0 }, c2: C64 { re: 1.0, im: 0.0 } };

    /// (y, y′) at z.
    pub fn eval(&self, family: &Family, z: C64) -> IdResult<(C64, C64)> {
        let p = family.pair(z)?;
        Ok((self.c1 * p[0] + self.c2 * p[2], self.c1 * p[1] + self.c2 * p[3]))
    }
}

/// I_n = P y² + Q y y′ + R y′², an antiderivative of zⁿ y².
pub fn closed_integral(family: Family, n: u32, y: Mix, z: C64) -> IdResult<C64> {
    let [p, q, r] = Rn::new(family, n)?.pqr(z)?;
    let (v, d) = y.eval(&family, z)?;
    Ok(p * v * v + q * v * d + r * d * d)
}

/// J_n = P y₁y₂ + Q(y₁y₂′ + y₂y₁′)/2 + R y₁′y₂′, an antiderivative of zⁿ y₁y₂.
pub fn closed_integral_mixed(family: Family, n: u32, y1: Mix, y2: Mix, z: C64) -> IdResult<C64> {
    let [p, q, r] = Rn::new(family, n)?.pqr(z)?;
    let (a, ap) = y1.eval(&family, z)?;
    let (b, bp) = y2.eval(&family, z)?;
    Ok(p * a * b + q * (a * bp + b * ap) / 2.0 + r * ap * bp)
}

/// ℒ_n y = R′y/2 − R y′.
pub fn l_n(family: Family, n: u32, y: Mix, z: C64) -> IdResult<C64> {
    let [r, rp, _] = Rn::new(family, n)?.eval(z)?;
    let (v, d) = y.eval(&family, z)?;
    Ok(rp * v / 2.0 - r * d)
}

/// W⁻¹(y₂∫y₁zⁿy − y₁∫y₂zⁿy), the integrals taken by quadrature from `anchor` to z.
/// Equals ℒ_n y up to a homogeneous solution fixed by the anchor.
pub fn l_n_by_quadrature(family: Family, n: u32, y: Mix, anchor: C64, z: C64, tol: f64) -> IdResult<C64> {
    let w = family.wronskian();
    let integrand = |k: usize| {
        move |s: C64| -> C64 {
            let p = match family.pair(s) {
                Ok(p) => p,
                Err(_) => return C64::new(f64::NAN, 0.0),
            };
            let yv = y.c1 * p[0] + y.c2 * p[2];
            p[2 * k] * s.powu(n) * yv
        }
    };
    let i1 = quadrature_oracle(integrand(0), anchor, z, tol)?;
    let i2 = quadrature_oracle(integrand(1), anchor, z, tol)?;
    let p = family.pair(z)?;
    Ok((p[2] * i1 - p[0] * i2) / w)
}

/// Adaptive Gauss–Kronrod along the straight segment [z_a, z_b].
pub fn quadrature_oracle<F: Fn(C64) -> C64>(g: F, za: C64, zb: C64, tol: f64) -> IdResult<C64> {
    Ok(quad::segment(g, za, zb, tol, 20_000)?.0)
}

/// Worst relative errors of the identity suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteReport {
    /// (family, n, point) cases checked.
    pub cases: usize,
    /// Five-point derivative of the closed form against the integrand.
    pub derivative: f64,
    /// Closed form against quadrature from the origin.
    pub quadrature: f64,
    /// Wronskians against their closed-form constants.
    pub wronskian: f64,
}

impl SuiteReport {
    pub const IDENTITY_TOL: f64 = 1e-6;
    pub const WRONSKIAN_TOL: f64 = 1e-9;

    pub fn passed(&self) -> bool {
        self.derivative < Self::IDENTITY_TOL && self.quadrature < Self::IDENTITY_TOL && self.wronskian < Self::WRONSKIAN_TOL
    }
}

/// Run every supported (family, n) at each point. A point is four numbers in
/// [0, 1) mapped to Re z ∈ [−2, 2), Im z ∈ [−0.8, 0.8) (real for Bessel) and
/// the mixing coefficients of y.
pub fn identity_suite(points: &[[f64; 4]]) -> IdResult<SuiteReport> {
    let a = C64::new(-0.5, -0.5);
    let i = C64::new(0.0, 1.0);
    let families = [
        (Family::Airy, C64::new(1.0 / PI, 0.0)),
        (Family::Pcf { a }, i * (-i * PI * (a / 2.0 + 0.25)).exp()),
        (Family::Bessel { lambda: 0.5 }, C64::new(-3.0 / PI, 0.0)),
    ];
    let stencil = |g: &dyn Fn(C64) -> IdResult<C64>, z: C64, h: f64| -> IdResult<C64> {
        Ok((-g(z + 2.0 * h)? + 8.0 * g(z + h)? - 8.0 * g(z - h)? + g(z - 2.0 * h)?) / (12.0 * h))
    };
    let zero = C64::new(0.0, 0.0);
    let mut r = SuiteReport { cases: 0, derivative: 0.0, quadrature: 0.0, wronskian: 0.0 };
    for (fam, w) in families {
        let real = matches!(fam, Family::Bessel { .. });
        r.wronskian = r.wronskian.max((fam.wronskian() - w).norm() / w.norm());
        for u in points {
            let z = C64::new(4.0 * u[0] - 2.0, if real { 0.0 } else { 1.6 * u[1] - 0.8 });
            let p = fam.pair(z)?;
            r.wronskian = r.wronskian.max((p[0] * p[3] - p[2] * p[1] - w).norm() / w.norm());
            let y = Mix { c1: C64::new(1.0, 2.0 * u[2] - 1.0), c2: C64::new(2.0 * u[3] - 1.0, 0.5) };
            for n in (0..=5).filter(|n| fam.supports(*n)) {
                let integrand = |s: C64| y.eval(&fam, s).map(|v| s.powu(n) * v.0 * v.0);
                let want = integrand(z)?;
                let d = stencil(&|s| closed_integral(fam, n, y, s), z, 1e-3)?;
                r.derivative = r.derivative.max((d - want).norm() / want.norm().max(1e-3));
                let closed = closed_integral(fam, n, y, z)? - closed_integral(fam, n, y, zero)?;
                let failed = RefCell::new(None);
                let q = quadrature_oracle(
                    |s| {
                        integrand(s).unwrap_or_else(|e| {
                            failed.borrow_mut().get_or_insert(e);
                            zero
                        })
                    },
                    zero,
                    z,
                    1e-13,
                )?;
                if let Some(e) = failed.into_inner() {
                    return Err(e);
                }
                r.quadrature = r.quadrature.max((closed - q).norm() / closed.norm().max(1e-3));
                r.cases += 1;
            }
        }
    }
    Ok(r)
}
