use glance::identities::*;
use glance::quad::romberg_midpoint;
use glance::specfun::{airy, gamma, AiryKind};
use glance::C64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn families() -> [Family; 3] {
    [Family::Airy, Family::Pcf { a: c(-0.5, -0.5) }, Family::Bessel { lambda: 0.5 }]
}

fn supported(f: &Family) -> Vec<u32> {
    (0..=5).filter(|n| f.supports(*n)).collect()
}

/// Sample point for a family: complex for Airy/PCF, real for the Bessel pair.
fn point(f: &Family, re: f64, im: f64) -> C64 {
    match f {
        Family::Bessel { .. } => c(re, 0.0),
        _ => c(re, im),
    }
}

fn stencil(g: impl Fn(C64) -> C64, z: C64, h: f64) -> C64 {
    (-g(z + 2.0 * h) + 8.0 * g(z + h) - 8.0 * g(z - h) + g(z - 2.0 * h)) / (12.0 * h)
}

#[test]
fn airy_i0_at_origin() {
    let v = closed_integral(Family::Airy, 0, Mix::FIRST, c(0.0, 0.0)).unwrap();
    let aip0 = 3f64.powf(-1.0 / 3.0) / gamma(c(1.0 / 3.0, 0.0)).re;
    assert!((v.re + aip0 * aip0).abs() < 1e-15 && v.im == 0.0);
    assert!((v.re + 0.066_987_483_779_663_974).abs() < 1e-15);
}

#[test]
fn bessel_i3_value() {
    // mpmath: (τ⁴/4)w₁² + w₁′²/(4λ²) at τ = 1.2, λ = 0.5
    let v = closed_integral(Family::Bessel { lambda: 0.5 }, 3, Mix::FIRST, c(1.2, 0.0)).unwrap();
    assert!((v - c(0.755_622_535_696_423_64, 0.0)).norm() < 1e-12);
}

#[test]
fn pcf_i1_against_quadrature() {
    let fam = Family::Pcf { a: c(-0.5, -0.5) };
    let z = c(0.9, 0.0);
    let closed = closed_integral(fam, 1, Mix::FIRST, z).unwrap() - closed_integral(fam, 1, Mix::FIRST, c(0.0, 0.0)).unwrap();
    let quad = quadrature_oracle(|s| s * Mix::FIRST.eval(&fam, s).unwrap().0.powu(2), c(0.0, 0.0), z, 1e-13).unwrap();
    // mpmath quad of z·U(a,z)² over [0, 0.9]
    let want = c(0.380_352_700_956_942_35, -0.014_808_578_920_881_967);
    assert!((closed - want).norm() < 1e-8 && (quad - want).norm() < 1e-8);
}

#[test]
fn airy_l_operator() {
    for z in [c(0.3, 0.2), c(-1.5, 0.7)] {
        let (_, d) = Mix::SECOND.eval(&Family::Airy, z).unwrap();
        assert!((l_n(Family::Airy, 0, Mix::SECOND, z).unwrap() - d).norm() < 1e-14);
    }
    let v = l_n(Family::Airy, 1, Mix::SECOND, c(2.0, 0.0)).unwrap();
    let want = 2.0 / 3.0 * airy(AiryKind::BiPrime, c(2.0, 0.0)).unwrap() - airy(AiryKind::Bi, c(2.0, 0.0)).unwrap() / 6.0;
    assert!((v - want).norm() < 1e-14);
    assert!((v - c(2.184_105_533_292_224_1, 0.0)).norm() < 1e-10);
}

#[test]
fn pcf_l3_form() {
    let a = c(-0.5, -0.5);
    let fam = Family::Pcf { a };
    let z = c(0.8, -0.3);
    let (y, d) = Mix::FIRST.eval(&fam, z).unwrap();
    let want = -(2.0 * z / 3.0) * y - ((16.0 * a - 2.0 * z * z) / 3.0) * d;
    assert!((l_n(fam, 3, Mix::FIRST, z).unwrap() - want).norm() < 1e-13);
}

#[test]
fn listed_polynomial_forms() {
    let z = c(1.3, -0.4);
    let airy: [C64; 5] = [c(-1.0, 0.0), -z / 3.0, -z * z / 5.0, -(z.powu(3) + 3.0) / 7.0, -(z.powu(4) + 4.0 * z) / 9.0];
    for (n, want) in airy.iter().enumerate() {
        let r = Rn::new(Family::Airy, n as u32).unwrap().eval(z).unwrap()[0];
        assert!((r - want).norm() < 1e-14, "Airy R_{n}");
    }
    let l = 0.5;
    let bes = [(3, c(1.0 / (4.0 * l * l), 0.0)), (4, z / (6.0 * l * l)), (5, z * z / (8.0 * l * l))];
    for (n, want) in bes {
        let r = Rn::new(Family::Bessel { lambda: l }, n).unwrap().eval(z).unwrap()[0];
        assert!((r - want).norm() < 1e-14, "Bessel R_{n}");
    }
}

#[test]
fn bessel_2f3_rn() {
    for n in 0..3 {
        assert_eq!(bessel_rn_2f3(n, 0.5, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }
    let r2 = bessel_rn_2f3(2, 0.5, c(50.0, 0.0)).unwrap();
    assert!((r2.re - 0.04).abs() < 0.05 * 0.04);
    // mpmath hyp2f3
    assert!((r2 - c(0.039_586_617_981_763_782, 0.0)).norm() < 1e-10 * 0.04);
    let r: Vec<f64> = (0..3).map(|n| bessel_rn_2f3(n, 0.5, c(100.0, 0.0)).unwrap().norm()).collect();
    assert!(r[2] > r[1] && r[1] > r[0]);
    let want = [0.000_446_549_318_790_350_9, 0.001_068_618_479_936_921_7, 0.019_918_893_973_657_984];
    for n in 0..3 {
        assert!((r[n] - want[n]).abs() < 1e-9 * want[n], "R_{n}(100)");
    }
    assert!((bessel_r2_far(0.5, 100.0) - 0.02).abs() < 1e-15);
    let far0 = bessel_r0_far(0.5, 100.0);
    assert!((far0 - want[0]).abs() < 0.05 * want[0]);
    assert!(matches!(bessel_rn_2f3(3, 0.5, c(1.0, 0.0)), Err(IdentityError::Unsupported { .. })));
    assert!(matches!(bessel_rn_2f3(0, 0.0, c(1.0, 0.0)), Err(IdentityError::ZeroLambda)));
}

#[test]
fn unsupported_cases() {
    assert!(matches!(Rn::new(Family::Airy, 5), Err(IdentityError::Unsupported { .. })));
    assert!(matches!(Rn::new(Family::Pcf { a: c(0.1, 0.0) }, 2), Err(IdentityError::Unsupported { .. })));
    assert!(matches!(closed_integral(Family::Bessel { lambda: 1.0 }, 6, Mix::FIRST, c(1.0, 0.0)), Err(IdentityError::Unsupported { .. })));
    let r7 = airy_rn_any(7, c(0.5, 0.0));
    assert!(r7[0].is_finite());
}

#[test]
fn quadrature_basics() {
    assert!((quadrature_oracle(|_| c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 1e-14).unwrap() - 1.0).norm() < 1e-15);
    let (za, zb, k) = (c(-1.0, 0.5), c(2.0, -1.5), c(0.3, -0.7));
    assert!((quadrature_oracle(|_| k, za, zb, 1e-14).unwrap() - k * (zb - za)).norm() < 1e-14);
    let g = |s: C64| s * airy(AiryKind::Ai, s).unwrap().powu(2);
    let q = quadrature_oracle(g, c(0.0, 0.0), c(2.0, 0.0), 1e-14).unwrap();
    let closed = closed_integral(Family::Airy, 1, Mix::FIRST, c(2.0, 0.0)).unwrap()
        - closed_integral(Family::Airy, 1, Mix::FIRST, c(0.0, 0.0)).unwrap();
    assert!((q - closed).norm() < 1e-9);
    let mid = romberg_midpoint(|x| g(c(x, 0.0)), 0.0, 2.0, 1e-12, 24).unwrap();
    assert!((q - mid).norm() < 1e-9);
}

#[test]
fn wronskians() {
    assert!((Family::Airy.wronskian().re - 1.0 / PI).abs() < 1e-16);
    assert!((Family::Bessel { lambda: 0.5 }.wronskian().re + 3.0 / PI).abs() < 1e-16);
    for fam in families() {
        for (re, im) in [(0.2, 0.1), (-1.7, 0.4), (2.5, -0.6), (0.0, 0.0)] {
            let z = point(&fam, re, im);
            let p = fam.pair(z).unwrap();
            let w = p[0] * p[3] - p[2] * p[1];
            assert!((w - fam.wronskian()).norm() < 1e-9 * fam.wronskian().norm(), "{} at {z}: {w}", fam.name());
        }
    }
}

fn mix(c1: (f64, f64), c2: (f64, f64)) -> Mix {
    Mix { c1: c(c1.0, c1.1), c2: c(c2.0, c2.1) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn closed_integral_derivative(re in -2.5..2.5f64, im in -1.0..1.0f64, a1 in -1.0..1.0f64, a2 in -1.0..1.0f64) {
        let y = mix((1.0, a1), (a2, 0.5));
        for fam in families() {
            let z = point(&fam, re, im);
            for n in supported(&fam) {
                let d = stencil(|s| closed_integral(fam, n, y, s).unwrap(), z, 1e-3);
                let want = z.powu(n) * y.eval(&fam, z).unwrap().0.powu(2);
                let scale = want.norm().max(1e-3);
                prop_assert!((d - want).norm() < 1e-6 * scale, "{} n={n} z={z}: {d} vs {want}", fam.name());
            }
        }
    }

    #[test]
    fn rn_ode_residual(re in -2.5..2.5f64, im in -1.0..1.0f64) {
        for fam in families() {
            let z = point(&fam, re, im);
            for n in supported(&fam) {
                let r = Rn::new(fam, n).unwrap();
                let [v, d1, _] = r.eval(z).unwrap();
                let d3 = stencil(|s| r.eval(s).unwrap()[2], z, 1e-3);
                let (f, fp) = fam.coefficient(z);
                let res = d3 - 4.0 * f * d1 - 2.0 * fp * v - 2.0 * z.powu(n);
                let scale = 1.0 + z.norm().powi(n as i32);
                prop_assert!(res.norm() < 1e-8 * scale, "{} n={n} z={z}: {res}", fam.name());
            }
        }
    }

    #[test]
    fn closed_form_matches_quadrature(re in -2.0..2.0f64, im in -0.8..0.8f64) {
        let y = Mix::FIRST;
        for fam in families() {
            let z = point(&fam, re, im);
            let z0 = c(0.0, 0.0);
            for n in supported(&fam) {
                let closed = closed_integral(fam, n, y, z).unwrap() - closed_integral(fam, n, y, z0).unwrap();
                let q = quadrature_oracle(|s| s.powu(n) * y.eval(&fam, s).unwrap().0.powu(2), z0, z, 1e-13).unwrap();
                prop_assert!((closed - q).norm() < 1e-6 * closed.norm().max(1e-3), "{} n={n}: {closed} vs {q}", fam.name());
            }
        }
    }

    #[test]
    fn l_operator_matches_wronskian_integrals(
        re in -2.0..2.0f64, im in -0.8..0.8f64,
        a in (-1.0..1.0f64, -1.0..1.0f64), b in (-1.0..1.0f64, -1.0..1.0f64),
    ) {
        let y = mix(a, b);
        for fam in families() {
            let z = point(&fam, re, im);
            let z0 = c(0.0, 0.0);
            for n in supported(&fam) {
                let quad = l_n_by_quadrature(fam, n, y, z0, z, 1e-13).unwrap();
                // restore the antiderivative constants the quadrature drops at the anchor
                let j1 = closed_integral_mixed(fam, n, Mix::FIRST, y, z0).unwrap();
                let j2 = closed_integral_mixed(fam, n, Mix::SECOND, y, z0).unwrap();
                let p = fam.pair(z).unwrap();
                let shifted = quad + (p[2] * j1 - p[0] * j2) / fam.wronskian();
                let want = l_n(fam, n, y, z).unwrap();
                prop_assert!((shifted - want).norm() < 1e-7 * want.norm().max(1.0), "{} n={n} z={z}: {shifted} vs {want}", fam.name());
            }
        }
    }
}
