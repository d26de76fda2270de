use super::gamma::{gamma, rgamma};
use super::taylor::continue_quadratic;
use super::{check_finite, EvalPolicy, SpecError, SpecResult, MAX_LOSS};
use crate::scalar::CompensatedSum;
use crate::C64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcfKind {
    /// U(a, z)
    U,
    /// D_n(z) = U(−n−½, z)
    D,
    /// ∂U(a,z)/∂z
    UPrime,
}

/// Side of the Stokes line |arg z| = π/2 whose expansion is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// |arg z| slightly below π/2 (one-term expansion).
    Inner,
    /// |arg z| slightly above π/2 (two-term expansion).
    Outer,
}

pub fn pcf(kind: PcfKind, a_or_n: C64, z: C64) -> SpecResult<C64> {
    match kind {
        PcfKind::U => pcf_u(a_or_n, z).map(|v| v.0),
        PcfKind::UPrime => pcf_u(a_or_n, z).map(|v| v.1),
        PcfKind::D => pcf_d(a_or_n, z),
    }
}

/// D_n(z) = U(−n−½, z).
pub fn pcf_d(n: C64, z: C64) -> SpecResult<C64> {
    pcf_u(-n - 0.5, z).map(|v| v.0)
}

/// (U(a,z), U′(a,z)).
pub fn pcf_u(a: C64, z: C64) -> SpecResult<(C64, C64)> {
    pcf_u_with(a, z, None, &EvalPolicy::default())
}

pub fn pcf_u_sided(a: C64, z: C64, side: Side) -> SpecResult<(C64, C64)> {
    pcf_u_with(a, z, Some(side), &EvalPolicy::default())
}

fn radius(a: C64, policy: &EvalPolicy) -> f64 {
    policy.pcf_radius.max(4.0 * a.norm().sqrt())
}

pub fn pcf_u_with(a: C64, z: C64, side: Option<Side>, policy: &EvalPolicy) -> SpecResult<(C64, C64)> {
    if !(z.re.is_finite() && z.im.is_finite() && a.re.is_finite() && a.im.is_finite()) {
        return Err(SpecError::Domain { func: "pcf", msg: "non-finite argument".into() });
    }
    let r = radius(a, policy);
    let (u, up) = if z.norm() >= r {
        let on_line = z.re == 0.0;
        if on_line && side.is_none() {
            return Err(SpecError::StokesLine { func: "pcf" });
        }
        pcf_u_asymptotic(a, z, side.unwrap_or(Side::Inner))
    } else {
        let (u, up, loss) = maclaurin(a, z, policy.max_terms);
        if loss <= MAX_LOSS {
            (u, up)
        } else {
            let start = z / z.norm() * r;
            let (u0, up0) = pcf_u_asymptotic(a, start, side.unwrap_or(Side::Inner));
            let p = [a, C64::new(0.0, 0.0), C64::new(0.25, 0.0)];
            continue_quadratic(p, start, u0, up0, z)
        }
    };
    Ok((check_finite("pcf", u)?, check_finite("pcf", up)?))
}

fn origin(a: C64) -> (C64, C64) {
    let sp = PI.sqrt();
    let two = C64::new(2.0, 0.0);
    let u0 = sp * rgamma(0.75 + a / 2.0) / two.powc(a / 2.0 + 0.25);
    let up0 = -sp * rgamma(0.25 + a / 2.0) / two.powc(a / 2.0 - 0.25);
    (u0, up0)
}

fn maclaurin(a: C64, z: C64, max_terms: usize) -> (C64, C64, f64) {
    let (u0, up0) = origin(a);
    // even solution e(z) and odd solution o(z) of y″ = (a + z²/4) y
    let zero = C64::new(0.0, 0.0);
    let mut se = CompensatedSum::new();
    let mut sep = CompensatedSum::new();
    let mut so = CompensatedSum::new();
    let mut sop = CompensatedSum::new();
    let mut peak: f64 = 0.0;
    // even chain: coefficients of z^{2m}; odd chain: z^{2m+1}
    let mut e_prev2 = zero;
    let mut e_cur = C64::new(1.0, 0.0);
    let mut o_prev2 = zero;
    let mut o_cur = C64::new(1.0, 0.0);
    let z2 = z * z;
    let mut pe = C64::new(1.0, 0.0); // z^{2m}
    let mut po = z; // z^{2m+1}
    let mut po_last = zero; // z^{2m−1}
    for m in 0..max_terms {
        let k = 2 * m;
        let te = e_cur * pe;
        let to = o_cur * po;
        se.add(te);
        so.add(to);
        if k > 0 {
            sep.add(e_cur * (k as f64) * po_last);
        }
        sop.add(o_cur * ((k + 1) as f64) * pe);
        let mag = (u0 * te).norm().max((up0 * to).norm());
        peak = peak.max(mag);
        let tot = (u0 * se.value()).norm() + (up0 * so.value()).norm();
        if m > 2 && mag <= 1e-18 * tot && (m as f64) > z2.norm() {
            break;
        }
        // (k+2)(k+1) c_{k+2} = a c_k + c_{k−2}/4
        let kf = k as f64;
        let e_next = (a * e_cur + e_prev2 / 4.0) / ((kf + 2.0) * (kf + 1.0));
        let o_next = (a * o_cur + o_prev2 / 4.0) / ((kf + 3.0) * (kf + 2.0));
        e_prev2 = e_cur;
        e_cur = e_next;
        o_prev2 = o_cur;
        o_cur = o_next;
        pe *= z2;
        po_last = po;
        po *= z2;
    }
    let u = u0 * se.value() + up0 * so.value();
    let up = u0 * sep.value() + up0 * sop.value();
    let loss = peak / u.norm().max(f64::MIN_POSITIVE);
    (u, up, loss)
}

fn opt_series(coef: impl Fn(usize) -> C64, x: C64) -> (C64, C64) {
    // returns Σ c_s x^s and Σ s c_s x^s
    let mut s = CompensatedSum::new();
    let mut sd = CompensatedSum::new();
    let mut p = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..200usize {
        let t = coef(k) * p;
        let m = t.norm();
        if k > 1 && m > last {
            break;
        }
        s.add(t);
        sd.add(t * k as f64);
        if m <= 1e-18 * s.value().norm() {
            break;
        }
        last = m;
        p *= x;
    }
    (s.value(), sd.value())
}

fn poch_series(p: C64) -> impl Fn(usize) -> C64 {
    // (p)_{2s} / (s! 2^s), built incrementally on demand
    let mut c = vec![C64::new(1.0, 0.0)];
    for s in 0..200usize {
        let sf = s as f64;
        let next = c[s] * (p + 2.0 * sf) * (p + 2.0 * sf + 1.0) / ((sf + 1.0) * 2.0);
        c.push(next);
    }
    move |s| c[s]
}

/// Large-|z| expansion with the subdominant term switched on beyond the
/// Stokes line |arg z| = π/2.
pub fn pcf_u_asymptotic(a: C64, z: C64, side: Side) -> (C64, C64) {
    let iz2 = 1.0 / (z * z);
    // one-term: e^{−z²/4} z^{−a−½} Σ (−1)^s (½+a)_{2s}/(s!(2z²)^s)
    let c1 = poch_series(a + 0.5);
    let (s1, s1d) = opt_series(|s| if s % 2 == 0 { c1(s) } else { -c1(s) }, iz2);
    let pre1 = (-z * z / 4.0).exp() * z.powc(-a - 0.5);
    let u1 = pre1 * s1;
    // d/dz of z^{−a−½−2s} e^{−z²/4}
    let up1 = pre1 * (s1 * (-z / 2.0 - (a + 0.5) / z) - 2.0 * s1d / z);
    let th = z.arg().abs();
    let outer = th > PI / 2.0 || (th == PI / 2.0 && side == Side::Outer);
    if !outer {
        return (u1, up1);
    }
    let sgn = if z.arg() >= 0.0 { 1.0 } else { -1.0 };
    let c2 = poch_series(0.5 - a);
    let (s2, s2d) = opt_series(&c2, iz2);
    let k = C64::new(0.0, sgn) * (2.0 * PI).sqrt() / gamma(0.5 + a) * (C64::new(0.0, -sgn * PI) * a).exp();
    let pre2 = k * (z * z / 4.0).exp() * z.powc(a - 0.5);
    let u2 = pre2 * s2;
    let up2 = pre2 * (s2 * (z / 2.0 + (a - 0.5) / z) - 2.0 * s2d / z);
    (u1 + u2, up1 + up2)
}
