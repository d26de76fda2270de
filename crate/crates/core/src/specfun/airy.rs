use super::taylor::continue_quadratic;
use super::{check_finite, EvalPolicy, SpecError, SpecResult, MAX_LOSS};
use crate::scalar::CompensatedSum;
use crate::C64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AiryKind {
    Ai,
    Bi,
    AiPrime,
    BiPrime,
}

// Ai(0) and −Ai′(0)
const AI0: f64 = 0.355_028_053_887_817_239_26;
const MAIP0: f64 = 0.258_819_403_792_806_798_41;
const SQRT3: f64 = 1.732_050_807_568_877_293_5;

pub fn airy(kind: AiryKind, z: C64) -> SpecResult<C64> {
    airy_with(kind, z, &EvalPolicy::default())
}

pub fn airy_with(kind: AiryKind, z: C64, policy: &EvalPolicy) -> SpecResult<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecError::Domain { func: "airy", msg: "non-finite argument".into() });
    }
    let r = policy.airy_radius;
    let v = if z.norm() >= r {
        airy_asymptotic(kind, z)
    } else {
        let (v, loss) = maclaurin(kind, z, policy.max_terms);
        if loss <= MAX_LOSS {
            v
        } else {
            stepped(kind, z, r)
        }
    };
    check_finite("airy", v)
}

/// Maclaurin-only evaluation (no cancellation guard).
pub fn airy_maclaurin(kind: AiryKind, z: C64) -> C64 {
    maclaurin(kind, z, EvalPolicy::default().max_terms).0
}

/// Returns the value and the cancellation factor max|term|/|value|.
fn maclaurin(kind: AiryKind, z: C64, max_terms: usize) -> (C64, f64) {
    let z3 = z * z * z;
    let deriv = matches!(kind, AiryKind::AiPrime | AiryKind::BiPrime);
    // f-part and g-part of the even/odd solutions
    let (mut f, mut g) = if deriv { (z * z / 2.0, C64::new(1.0, 0.0)) } else { (C64::new(1.0, 0.0), z) };
    let mut sf = CompensatedSum::new();
    let mut sg = CompensatedSum::new();
    if deriv {
        sf.add(C64::new(0.0, 0.0));
    } else {
        sf.add(f);
    }
    sg.add(g);
    let mut peak = if deriv { g.norm() } else { f.norm().max(g.norm()) };
    if deriv {
        sf.add(f);
        peak = peak.max(f.norm());
    }
    for k in 0..max_terms {
        let kf = k as f64;
        if deriv {
            // f′ terms start at k=1: ratio z³/(3k(3k+2)) for k≥1
            let k1 = kf + 1.0;
            f *= z3 / (3.0 * k1 * (3.0 * k1 + 2.0));
            g *= z3 / ((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        } else {
            f *= z3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
            g *= z3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        }
        sf.add(f);
        sg.add(g);
        let m = f.norm().max(g.norm());
        peak = peak.max(m);
        let tot = sf.value().norm() + sg.value().norm();
        if m <= 1e-18 * tot && kf > z3.norm().cbrt() {
            break;
        }
    }
    let (fs, gs) = (sf.value(), sg.value());
    let v = match kind {
        AiryKind::Ai | AiryKind::AiPrime => AI0 * fs - MAIP0 * gs,
        AiryKind::Bi | AiryKind::BiPrime => SQRT3 * (AI0 * fs + MAIP0 * gs),
    };
    let loss = peak / v.norm().max(f64::MIN_POSITIVE);
    (v, loss)
}

/// Continue (Ai, Ai′) or (Bi, Bi′) inward from radius `r` on the ray of z.
fn stepped(kind: AiryKind, z: C64, r: f64) -> C64 {
    let start = z / z.norm() * r;
    let (vk, dk) = match kind {
        AiryKind::Ai | AiryKind::AiPrime => (AiryKind::Ai, AiryKind::AiPrime),
        _ => (AiryKind::Bi, AiryKind::BiPrime),
    };
    let y0 = airy_asymptotic(vk, start);
    let yp0 = airy_asymptotic(dk, start);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let (y, yp) = continue_quadratic([zero, one, zero], start, y0, yp0, z);
    if kind == vk {
        y
    } else {
        yp
    }
}

/// Asymptotic expansion, valid in every sector for large |z|.
pub fn airy_asymptotic(kind: AiryKind, z: C64) -> C64 {
    match kind {
        AiryKind::Ai => ai_asym(z).0,
        AiryKind::AiPrime => ai_asym(z).1,
        AiryKind::Bi => {
            let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
            C64::from_polar(1.0, PI / 6.0) * ai_asym(z * w).0 + C64::from_polar(1.0, -PI / 6.0) * ai_asym(z * w.conj()).0
        }
        AiryKind::BiPrime => {
            let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
            C64::from_polar(1.0, 5.0 * PI / 6.0) * ai_asym(z * w).1 + C64::from_polar(1.0, -5.0 * PI / 6.0) * ai_asym(z * w.conj()).1
        }
    }
}

fn uk_vk(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

/// Σ c_k x^k with x small, truncated at the smallest term.
fn opt_sum(coef: impl Fn(usize) -> f64, x: C64, n: usize) -> C64 {
    let mut s = CompensatedSum::new();
    let mut p = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..n {
        let t = coef(k) * p;
        let m = t.norm();
        if k > 1 && m > last {
            break;
        }
        s.add(t);
        if m <= 1e-18 * s.value().norm() {
            break;
        }
        last = m;
        p *= x;
    }
    s.value()
}

fn ai_asym(z: C64) -> (C64, C64) {
    const N: usize = 60;
    let (u, v) = uk_vk(2 * N + 2);
    let sqpi = PI.sqrt();
    if z.arg().abs() <= 2.0 * PI / 3.0 {
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let q4 = z.powf(0.25);
        let iz = -1.0 / zeta;
        let su = opt_sum(|k| u[k], iz, N);
        let sv = opt_sum(|k| v[k], iz, N);
        let e = (-zeta).exp();
        (e / (2.0 * sqpi * q4) * su, -q4 * e / (2.0 * sqpi) * sv)
    } else {
        let w = -z;
        let zeta = 2.0 / 3.0 * w.powf(1.5);
        let q4 = w.powf(0.25);
        let x2 = -1.0 / (zeta * zeta);
        let ue = opt_sum(|k| u[2 * k], x2, N);
        let uo = opt_sum(|k| u[2 * k + 1], x2, N) / zeta;
        let ve = opt_sum(|k| v[2 * k], x2, N);
        let vo = opt_sum(|k| v[2 * k + 1], x2, N) / zeta;
        let th = zeta - PI / 4.0;
        let (c, s) = (th.cos(), th.sin());
        ((c * ue + s * uo) / (sqpi * q4), q4 / sqpi * (s * ve - c * vo))
    }
}
