use super::{check_finite, EvalPolicy, SpecResult};
use crate::quad::gauss_kronrod;
use crate::scalar::CompensatedSum;
use crate::C64;
use std::f64::consts::PI;

/// Complementary error function.
///
/// Inside `erfc_radius` the Maclaurin series of erf is used. Beyond it the
/// asymptotic expansion is truncated after n terms and the exact remainder
/// R_n(z) = (−1)^n (2n)!/(√π 2^{2n−1} n!) ∫_z^∞ s^{−2n} e^{−s²} ds
/// is added by quadrature whenever it is not negligible.
pub fn erfc(z: C64) -> SpecResult<C64> {
    let policy = EvalPolicy::default();
    if z.re < 0.0 {
        return Ok(C64::new(2.0, 0.0) - erfc(-z)?);
    }
    let v = if z.norm() < policy.erfc_radius { C64::new(1.0, 0.0) - erf_series(z) } else { erfc_large(z) };
    check_finite("erfc", v)
}

fn erf_series(z: C64) -> C64 {
    let z2 = z * z;
    let mut t = z;
    let mut s = CompensatedSum::new();
    s.add(t);
    for n in 1..200 {
        let nf = n as f64;
        t *= -z2 / nf;
        let term = t / (2.0 * nf + 1.0);
        s.add(term);
        if term.norm() < 1e-18 * s.value().norm() {
            break;
        }
    }
    2.0 / PI.sqrt() * s.value()
}

fn erfc_large(z: C64) -> C64 {
    let r2 = z.norm_sqr();
    let n = (r2.ceil() as usize).clamp(1, 60);
    let x = 1.0 / (2.0 * z * z);
    let mut s = CompensatedSum::new();
    let mut t = C64::new(1.0, 0.0);
    for k in 0..n {
        s.add(t);
        t *= -x * (2.0 * k as f64 + 1.0);
    }
    let lead = (-z * z).exp() / (z * PI.sqrt()) * s.value();
    if r2 > 40.0 {
        return lead;
    }
    // remainder along s = z + u, u ∈ [0, ∞)
    let nn = n as i32;
    let mut c = 2.0 / PI.sqrt();
    for k in 1..=n {
        c *= (2 * k - 1) as f64 / 2.0;
    }
    if n % 2 == 1 {
        c = -c;
    }
    let upper = ((z.im * z.im + 60.0).sqrt() - z.re).max(1.0) + 1.0;
    let f = |u: f64| {
        let s = z + u;
        (-s * s).exp() * s.powi(-2 * nn)
    };
    let scale = (-z * z).exp().norm() * r2.powi(-nn) + 1e-300;
    let (integral, _) = gauss_kronrod(f, 0.0, upper, 1e-13 * scale, 4000).unwrap_or((C64::new(f64::NAN, 0.0), 0.0));
    lead + c * integral
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_reflection() {
        assert!((erfc(C64::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-16);
        let z = C64::new(0.8, 0.3);
        let s = erfc(z).unwrap() + erfc(-z).unwrap();
        assert!((s - 2.0).norm() < 1e-14);
    }

    #[test]
    fn reference_points() {
        let cases = [
            (C64::new(0.5, 0.2), C64::new(0.4616283145242945, -0.176930499005884)),
            (C64::new(1.9, 0.1), C64::new(0.006633683072429115, -0.002989306694909931)),
            (C64::new(2.1, 0.0), C64::new(0.002979466656332984, 0.0)),
            (C64::new(3.0, 1.0), C64::new(5.7613867986237605e-05, -7.717956381378014e-07)),
            (C64::new(4.0, 4.0), C64::new(0.021450766923918074, -0.09733969063083187)),
            (C64::new(2.5, 2.5), C64::new(0.12363680464957867, -0.09992877379159747)),
            (C64::new(5.0, 0.0), C64::new(1.537459794428035e-12, 0.0)),
            (C64::new(7.0, -1.0), C64::new(-2.3160027336658245e-25, 1.1264786396212908e-22)),
            (C64::new(-3.0, 2.0), C64::new(1.9989632788568172, 1.1546724379290603e-05)),
            (C64::new(0.3, 5.0), C64::new(-1534630509.782883, 7411249484.557963)),
        ];
        for (z, want) in cases {
            let got = erfc(z).unwrap();
            assert!((got - want).norm() < 1e-11 * want.norm(), "erfc({z}) = {got}, want {want}");
        }
    }
}
