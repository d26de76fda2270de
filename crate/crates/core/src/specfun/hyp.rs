use super::dd::{CDd, Dd};
use super::gamma::{digamma, gamma, rgamma};
use super::{check_finite, EvalPolicy, SpecError, SpecResult};
use crate::scalar::CompensatedSum;
use crate::C64;
use std::f64::consts::PI;

/// ₂F₃(a₁,a₂; b₁,b₂,b₃; z).
pub fn hyp2f3(a: [C64; 2], b: [C64; 3], z: C64) -> SpecResult<C64> {
    hyp2f3_with(a, b, z, &EvalPolicy::default())
}

pub fn hyp2f3_with(a: [C64; 2], b: [C64; 3], z: C64, policy: &EvalPolicy) -> SpecResult<C64> {
    for bi in b {
        if bi.im == 0.0 && bi.re <= 0.0 && bi.re == bi.re.round() {
            return Err(SpecError::Domain { func: "hyp2f3", msg: "b is a non-positive integer".into() });
        }
    }
    let terminating = a.iter().any(|ai| ai.im == 0.0 && ai.re <= 0.0 && ai.re == ai.re.round());
    let v =
        if terminating || z.norm() < policy.hyp_radius { hyp2f3_series(a, b, z, policy.max_terms)? } else { hyp2f3_asymptotic(a, b, z)? };
    check_finite("hyp2f3", v)
}

/// Maclaurin series, summed in double-double arithmetic.
pub fn hyp2f3_series(a: [C64; 2], b: [C64; 3], z: C64, max_terms: usize) -> SpecResult<C64> {
    series_dd(a.map(CDd::from_c64), b.map(CDd::from_c64), z, max_terms)
}

/// ₂F₃ with parameters that are exact multiples of 1/6 (a = a6/6, b = b6/6).
///
/// Inside the series radius the result suffers e^{2√|z|} cancellation, so
/// parameters rounded to f64 would already perturb it; here they are formed
/// in double-double precision.
pub fn hyp2f3_sixths(a6: [i32; 2], b6: [i32; 3], z: C64) -> SpecResult<C64> {
    let policy = EvalPolicy::default();
    let sixth = |n: i32| C64::new(n as f64 / 6.0, 0.0);
    if z.norm() >= policy.hyp_radius {
        let v = hyp2f3_asymptotic(a6.map(sixth), b6.map(sixth), z)?;
        return check_finite("hyp2f3", v);
    }
    let exact = |n: i32| CDd { re: Dd::new(n as f64) / Dd::new(6.0), im: Dd::ZERO };
    let v = series_dd(a6.map(exact), b6.map(exact), z, policy.max_terms)?;
    check_finite("hyp2f3", v)
}

fn series_dd(a: [CDd; 2], b: [CDd; 3], z: C64, max_terms: usize) -> SpecResult<C64> {
    let one = CDd::from_c64(C64::new(1.0, 0.0));
    let zd = CDd::from_c64(z);
    let mut term = one;
    let mut sum = one;
    let mut quiet = 0;
    for k in 0..max_terms {
        let kd = CDd::from_c64(C64::new(k as f64, 0.0));
        let num = (a[0] + kd) * (a[1] + kd) * zd;
        let den = (kd + one) * (b[0] + kd) * (b[1] + kd) * (b[2] + kd);
        term = term * num / den;
        sum = sum + term;
        let t = term.norm_f64();
        if t == 0.0 {
            return Ok(sum.to_c64());
        }
        let kf = k as f64;
        if t <= 1e-17 * sum.norm_f64() && kf * kf > z.norm() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum.to_c64());
            }
        } else {
            quiet = 0;
        }
    }
    Err(SpecError::NonConvergence { func: "hyp2f3", terms: max_terms })
}

/// Large-|z| form: F(−Z)·Γ(a)/Γ(b) ~ H(Z) + E(Ze^{iπ}) + E(Ze^{−iπ}), Z = −z.
pub fn hyp2f3_asymptotic(a: [C64; 2], b: [C64; 3], z: C64) -> SpecResult<C64> {
    let zz = -z;
    let h = if a[0] == a[1] {
        h_double(a[0], b, zz)
    } else {
        let d = a[1] - a[0];
        if d.im == 0.0 && d.re == d.re.round() {
            return Err(SpecError::Domain { func: "hyp2f3", msg: "a₁ − a₂ a nonzero integer is unsupported".into() });
        }
        h_simple(a[0], a[1], b, zz) + h_simple(a[1], a[0], b, zz)
    };
    let e = e_part(a, b, zz, 1.0) + e_part(a, b, zz, -1.0);
    let norm = gamma(b[0]) * gamma(b[1]) * gamma(b[2]) * rgamma(a[0]) * rgamma(a[1]);
    Ok((h + e) * norm)
}

/// Σ_k over the simple poles at s = −a_m − k.
fn h_simple(am: C64, al: C64, b: [C64; 3], zz: C64) -> C64 {
    let c = al - am;
    let d = [b[0] - am, b[1] - am, b[2] - am];
    let lz = zz.ln();
    let mut t = gamma(am) * gamma(c) * rgamma(d[0]) * rgamma(d[1]) * rgamma(d[2]) * (-am * lz).exp();
    let mut s = CompensatedSum::new();
    let mut last = f64::INFINITY;
    for k in 0..200usize {
        let m = t.norm();
        if k > 1 && m > last {
            break;
        }
        s.add(t);
        if m <= 1e-18 * s.value().norm() {
            break;
        }
        last = if m == 0.0 { last } else { m };
        let kf = k as f64;
        t *= -(am + kf) / ((kf + 1.0) * (c - kf - 1.0) * zz) * (d[0] - kf - 1.0) * (d[1] - kf - 1.0) * (d[2] - kf - 1.0);
    }
    s.value()
}

/// Double poles when a₁ = a₂ = a.
fn h_double(a: C64, b: [C64; 3], zz: C64) -> C64 {
    let lz = zz.ln();
    let mut s = CompensatedSum::new();
    let mut last = f64::INFINITY;
    let mut fact = 1.0f64;
    for k in 0..150usize {
        let kf = k as f64;
        if k > 0 {
            fact *= kf;
        }
        let g = gamma(a + kf) * (-(a + kf) * lz).exp() * rgamma(b[0] - a - kf) * rgamma(b[1] - a - kf) * rgamma(b[2] - a - kf);
        // ψ(b−a−k) can sit on a pole only where 1/Γ vanishes; use the regular product
        let mut bracket = 2.0 * digamma(C64::new(kf + 1.0, 0.0)) - digamma(a + kf) + lz;
        let mut extra = C64::new(0.0, 0.0);
        for bl in b {
            let x = bl - a - kf;
            if x.im == 0.0 && x.re <= 0.0 && x.re == x.re.round() {
                // 1/Γ(x)·ψ(x) → (−1)^{n+1} n! at x = −n
                let n = -x.re as i32;
                let mut nf = 1.0;
                for j in 1..=n {
                    nf *= j as f64;
                }
                let others: C64 = b.iter().filter(|&&o| o != bl).map(|&o| rgamma(o - a - kf)).product();
                extra -= gamma(a + kf) * (-(a + kf) * lz).exp() * others * (if n % 2 == 0 { -nf } else { nf });
            } else {
                bracket -= digamma(x);
            }
        }
        let t = (g * bracket + extra) / (fact * fact);
        let m = t.norm();
        if k > 2 && m > last {
            break;
        }
        s.add(t);
        if m <= 1e-18 * s.value().norm() && k > 2 {
            break;
        }
        last = m;
    }
    s.value()
}

/// Exponential part evaluated at Z e^{±iπ}.
fn e_part(a: [C64; 2], b: [C64; 3], zz: C64, sign: f64) -> C64 {
    let nu = a[0] + a[1] - b[0] - b[1] - b[2] + 0.5;
    let lu = 0.5 * C64::new(zz.norm().ln(), zz.arg() + sign * PI);
    let u = lu.exp();
    let d = e_coeffs(a, b, nu, 60);
    let iu = 1.0 / u;
    let mut s = CompensatedSum::new();
    let mut p = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for dk in d.iter() {
        let t = dk * p;
        let m = t.norm();
        if m > last {
            break;
        }
        s.add(t);
        if m <= 1e-18 * s.value().norm() {
            break;
        }
        last = m;
        p *= iu;
    }
    (2.0 * u + nu * lu).exp() * s.value() / (2.0 * PI.sqrt())
}

/// Coefficients d_k of e^{2u} Σ d_k u^{ν−k} solving the ₂F₃ equation in u = √z.
fn e_coeffs(a: [C64; 2], b: [C64; 3], nu: C64, n: usize) -> Vec<C64> {
    const Q: usize = 3;
    // P_k: L applied to e^{2u}u^{ν−k}, as coefficients of u^{ν−k+j}, j = 0..=Q+1
    let apply = |s: C64, shifts: &[C64]| -> Vec<C64> {
        let mut v = vec![C64::new(1.0, 0.0)];
        for &c in shifts {
            let mut w = vec![C64::new(0.0, 0.0); v.len() + 1];
            for (j, &x) in v.iter().enumerate() {
                w[j + 1] += x;
                w[j] += x * ((s + j as f64) / 2.0 + c);
            }
            v = w;
        }
        v
    };
    let poly = |k: usize| -> Vec<C64> {
        let s = nu - k as f64;
        let first = apply(s, &[C64::new(0.0, 0.0), b[0] - 1.0, b[1] - 1.0, b[2] - 1.0]);
        let second = apply(s, &[a[0], a[1]]);
        let mut p = first;
        for (j, x) in second.iter().enumerate() {
            p[j + 2] -= x;
        }
        p
    };
    let polys: Vec<Vec<C64>> = (0..n).map(poly).collect();
    let mut d = vec![C64::new(1.0, 0.0)];
    for m in 1..n {
        let mut acc = C64::new(0.0, 0.0);
        for k in m.saturating_sub(Q)..m {
            acc += d[k] * polys[k][Q + k - m];
        }
        d.push(-acc / polys[m][Q]);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn zero_argument() {
        let v = hyp2f3([r(0.3), C64::new(1.0, 2.0)], [r(1.5), r(0.7), C64::new(2.0, -1.0)], r(0.0)).unwrap();
        assert_eq!(v, r(1.0));
    }

    #[test]
    fn leading_e_coefficient_condition() {
        let a = [r(1.0), r(5.0 / 6.0)];
        let b = [r(7.0 / 6.0), r(8.0 / 6.0), r(9.0 / 6.0)];
        let nu = a[0] + a[1] - b[0] - b[1] - b[2] + 0.5;
        assert!((nu.re + 5.0 / 3.0).abs() < 1e-15);
        let d = e_coeffs(a, b, nu, 5);
        assert!(d.iter().all(|x| x.re.is_finite()));
    }
}
