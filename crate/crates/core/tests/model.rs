use glance::model::{ModelError, RegimeKind};
use glance::{ModelParams, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn heun_params_at_zero_alpha() {
    let p = ModelParams::real(1.0, 0.0, 2.0).heun_params().unwrap();
    let h = C64::from_polar(3f64.cbrt(), PI / 6.0);
    assert_eq!(p.xi, C64::new(0.0, 0.0));
    assert_eq!(p.nu, C64::new(3.0, 0.0));
    assert!((p.h - h).norm() < 1e-14);
    assert!((p.mu - h * h).norm() < 1e-14);
    assert!((p.h.powu(6) + 2.25 / (0.5f64 * 0.5)).norm() < 1e-12);
}

#[test]
fn airy_and_pcf_variables() {
    let p = ModelParams::real(1.0, 0.0, 2.0);
    let want = C64::from_polar(1.0, PI / 6.0) * C64::new(0.0, 1.0);
    assert!((p.airy_z(0.0).unwrap() - want).norm() < 1e-14);
    let q = ModelParams::real(1.0, 2.0, 0.0);
    let want = C64::from_polar(2f64.sqrt(), -PI / 4.0);
    assert!((q.pcf_z(1.0).unwrap() - want).norm() < 1e-14);
    assert_eq!(q.airy_z(0.0), Err(ModelError::ZeroBeta));
}

#[test]
fn airy_variable_sector() {
    let p = ModelParams::real(1.0, 0.2, 2.0);
    for k in 0..=200 {
        let t = -10.0 + 0.1 * k as f64;
        let a = p.airy_z(t).unwrap().arg().rem_euclid(2.0 * PI);
        assert!(a > PI / 6.0 && a < 7.0 * PI / 6.0, "arg z({t}) = {a}");
    }
}

#[test]
fn regime_examples() {
    let tag = ModelParams::real(1.0, 0.0, 2.0).classify_regime(0.0).unwrap();
    assert_eq!(tag.kind, RegimeKind::ShortSmallRatio);
    assert!((tag.t_star - 1.5874).abs() < 1e-4);
    let tag = ModelParams::real(1.0, 2.0, 0.2).classify_regime(0.0).unwrap();
    assert_eq!(tag.kind, RegimeKind::ShortLargeRatio);
    assert!((tag.t_star - 10.0).abs() < 1e-12);
    let p = ModelParams::real(1.0, 0.2, 2.0);
    assert_eq!(p.classify_regime(0.0).unwrap().kind, RegimeKind::ShortSmallRatio);
    assert_eq!(p.classify_regime(5.0).unwrap().kind, RegimeKind::Long);
}

proptest! {
    #[test]
    fn detuning_is_quadratic(alpha in -5.0..5.0f64, beta in -5.0..5.0f64, t in -10.0..10.0f64) {
        let p = ModelParams::real(1.0, alpha, beta);
        let h = 0.5;
        let d2 = (p.detuning(t + h) - 2.0 * p.detuning(t) + p.detuning(t - h)) / (h * h);
        prop_assert!((d2 - beta).abs() < 1e-11 * (1.0 + p.detuning(t).abs()));
    }

    #[test]
    fn heun_form_rebuilds_coefficient(
        f in 0.0..2.0f64, alpha in -2.0..2.0f64, beta in 0.1..4.0f64, t in -6.0..6.0f64,
    ) {
        let p = ModelParams::real(f, alpha, beta);
        let hp = p.heun_params().unwrap();
        let tau = C64::new(p.tau(t).unwrap(), 0.0);
        let want = p.u1_coefficient(t);
        let got = hp.coefficient(tau);
        prop_assert!((got - want).norm() < 1e-10 * (1.0 + want.norm()), "{got} vs {want}");
    }

    #[test]
    fn airy_regime_symmetric_in_tau(alpha in 0.0..0.5f64, beta in 0.5..4.0f64, t in -5.0..5.0f64) {
        let p = ModelParams::real(1.0, alpha, beta);
        let mirror = -t - 2.0 * alpha / beta;
        prop_assert_eq!(p.classify_regime(t).unwrap(), p.classify_regime(mirror).unwrap());
    }
}
