use glance::dynamics::*;
use glance::{ModelParams, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn lower(t: f64) -> TwoLevelState {
    TwoLevelState { t, c1: C64::new(0.0, 0.0), c2: C64::new(1.0, 0.0) }
}

#[test]
fn rabi_oscillation() {
    let p = ModelParams::real(1.0, 0.0, 0.0);
    let tr = integrate_coupled(&p, lower(0.0), 4.0 * PI, 1e-12).unwrap();
    assert!((tr.at(PI / 2.0).c1.norm_sqr() - 1.0).abs() < 1e-9);
    let sup = tr.resample(2001).iter().map(|s| (s.c1.norm_sqr() - s.t.sin().powi(2)).abs()).fold(0.0, f64::max);
    assert!(sup < 1e-8, "sup error {sup}");
}

#[test]
fn decoupled_populations_stay_put() {
    let p = ModelParams::real(0.0, 0.7, 1.3);
    let init = TwoLevelState { t: -3.0, c1: C64::new(0.6, 0.0), c2: C64::new(0.0, 0.8) };
    let tr = integrate_coupled(&p, init, 4.0, 1e-10).unwrap();
    for s in tr.samples() {
        assert!((s.c1.norm_sqr() - 0.36).abs() < 1e-12 && (s.c2.norm_sqr() - 0.64).abs() < 1e-12);
    }
}

#[test]
fn landau_zener_limit() {
    let p = ModelParams::real(1.0, 2.0, 0.0);
    let seed = seed_state(&p, -60.0).unwrap();
    let end = integrate_coupled(&p, seed, 60.0, 1e-10).unwrap().end();
    let got = final_amplitude(&p, &end).norm_sqr();
    assert!((got - 0.956_786_081_736_227_8).abs() < 1e-4, "{got}");
}

#[test]
fn u1_and_coupled_agree_on_fig1() {
    let p = ModelParams::real(1.0, 0.2, 2.0);
    let tol = 1e-10;
    let init = ground_start(&p, -1.0);
    for k in 1..=12 {
        let t = -1.0 + 0.25 * k as f64;
        let a = integrate_u1(&p, init, t, tol).unwrap().end().u1.norm_sqr();
        let b = integrate_coupled(&p, coupled_from_u1(&p, &init), t, tol).unwrap().end().c1.norm_sqr();
        assert!((a - b).abs() < 10.0 * tol, "t={t}: {a} vs {b}");
    }
    let u = integrate_u1(&p, init, 2.0, tol).unwrap();
    // mpmath odefun, 30 digits
    let want = C64::new(-0.379_584_899_675_963_56, 0.610_083_623_984_582_06);
    assert!((u.end().u1 - want).norm() < 1e-8, "{}", u.end().u1);
}

#[test]
fn u1_round_trips_through_coupled() {
    let p = ModelParams::new(C64::new(0.6, -0.8), 0.3, 1.1).unwrap();
    let s = TwoLevelState { t: 0.7, c1: C64::new(0.3, 0.4), c2: C64::new(0.0, (1.0f64 - 0.25).sqrt()) };
    let back = coupled_from_u1(&p, &u1_from_coupled(&p, &s));
    assert!((back.c1 - s.c1).norm() < 1e-14 && (back.c2 - s.c2).norm() < 1e-14);
}

#[test]
fn seed_has_unit_rate_and_quartic_decay() {
    let p = ModelParams::real(1.0, 1.0, 2.0);
    let (c1, c1dot) = asymptotic_seed(&p, -40.0).unwrap();
    assert!((c1dot.norm() - 1.0).abs() < 0.05);
    let (c2x, _) = asymptotic_seed(&p, -80.0).unwrap();
    assert!((c2x.norm() / c1.norm() - 0.25).abs() < 0.25 * 0.05);
    assert!(matches!(asymptotic_seed(&p, -2.0), Err(DynamicsError::NotAsymptotic { .. })));
}

#[test]
fn far_seed_leaves_little_upper_population_before_crossing() {
    let p = ModelParams::real(1.0, 1.0, 2.0);
    let s = integrate_coupled(&p, seed_state(&p, -50.0).unwrap(), -5.0, 1e-10).unwrap().end();
    let u = u1_from_coupled(&p, &s);
    assert!(u.u1.norm_sqr() < 0.02);
}

#[test]
fn adiabatic_tail_ratios() {
    let lin = ModelParams::real(1.0, 2.0, 0.0);
    let t = adiabatic_tail(&lin, TailModel::Linear, 30.0).unwrap();
    assert!((t.ratio - (-PI / 2.0).exp()).abs() < 1e-15 && !t.caveat);
    assert!((t.c2.norm() - 0.2079).abs() < 1e-4);
    let free = ModelParams::real(0.0, 2.0, 0.0);
    assert_eq!(adiabatic_tail(&free, TailModel::Linear, 30.0).unwrap().ratio, 1.0);
    let par = ModelParams::real(1.0, 1.0, 2.0);
    let t = adiabatic_tail(&par, TailModel::Parabolic, 30.0).unwrap();
    assert!(t.caveat && t.ratio == 1.0 && (t.c2.norm() - 1.0).abs() < 1e-15);
}

#[test]
fn weak_coupling_closed_form() {
    let p = ModelParams::real(0.01, 2.0, 0.0);
    let seed = seed_state(&p, -60.0).unwrap();
    let tr = integrate_coupled(&p, seed, 3.0, 1e-12).unwrap();
    for t in [-1.0, 0.0, 1.5, 3.0] {
        let want = linear_weak_coupling_c1(&p, t).unwrap();
        let got = tr.at(t).c1;
        assert!((got - want).norm() < 2e-3 * want.norm(), "t={t}: {got} vs {want}");
    }
}

#[test]
fn csv_layout() {
    let mut buf = Vec::new();
    write_csv(&mut buf, &[TwoLevelState { t: 0.1, c1: C64::new(0.6, 0.0), c2: C64::new(0.0, -0.8) }]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re_c1,im_c1,re_c2,im_c2,p1,p2"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row, vec![0.1, 0.6, 0.0, 0.0, -0.8, 0.36, 0.64000000000000012]);
}

#[test]
fn tolerance_convergence() {
    let p = ModelParams::real(1.0, 2.0, 0.0);
    let seed = seed_state(&p, -20.0).unwrap();
    let end = |tol| integrate_coupled(&p, seed, 20.0, tol).unwrap().end().c1;
    let reference = end(1e-10);
    let e1 = (end(1e-6) - reference).norm();
    let e2 = (end(5e-7) - reference).norm();
    assert!(e1 >= 2.0 * e2 * 0.99 || e2 < 1e-9, "{e1} {e2}");
}

#[test]
fn rejects_bad_input() {
    let p = ModelParams::real(1.0, 2.0, 0.0);
    let bad = TwoLevelState { t: 0.0, c1: C64::new(1.0, 0.0), c2: C64::new(1.0, 0.0) };
    assert!(matches!(integrate_coupled(&p, bad, 1.0, 1e-10), Err(DynamicsError::NotNormalized(_))));
    assert!(integrate_coupled(&p, lower(0.0), 1.0, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn norm_reversibility_and_rate_bound(
        f in 0.1..2.0f64, phi in 0.0..6.2f64, alpha in -2.0..2.0f64, beta in -2.0..2.0f64,
        t0 in -4.0..0.0f64, span in 0.5..6.0f64, tol_exp in 7.0..11.0f64,
    ) {
        let tol = 10f64.powf(-tol_exp);
        let p = ModelParams::new(C64::from_polar(f, phi), alpha, beta).unwrap();
        let fw = integrate_coupled(&p, lower(t0), t0 + span, tol).unwrap();
        prop_assert!(fw.norm_drift.unwrap() < 100.0 * tol);
        for s in fw.samples() {
            let rate = f * s.c2.norm();
            prop_assert!(rate <= f * (1.0 + 100.0 * tol));
        }
        let back = integrate_coupled(&p, fw.end(), t0, tol).unwrap().end();
        let err = (back.c1 - C64::new(0.0, 0.0)).norm().max((back.c2 - C64::new(1.0, 0.0)).norm());
        prop_assert!(err < 10.0 * tol, "round trip {err} at tol {tol}");
    }
}
