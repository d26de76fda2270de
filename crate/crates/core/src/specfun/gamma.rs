use crate::C64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: C64) -> C64 {
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    x
}

/// ln Γ(z), principal branch for Re z ≥ 1/2, continued by reflection.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // Γ(z) = π / (sin πz Γ(1−z))
        C64::new(PI.ln(), 0.0) - (z * PI).sin().ln() - ln_gamma(1.0 - z)
    } else {
        let z = z - 1.0;
        let t = z + G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
    }
}

pub fn gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        PI / ((z * PI).sin() * gamma(1.0 - z))
    } else {
        ln_gamma(z).exp()
    }
}

/// 1/Γ(z); entire, exactly zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return C64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (z * PI).sin() * gamma(1.0 - z) / PI
    } else {
        (-ln_gamma(z)).exp()
    }
}

/// ψ(z) = Γ′(z)/Γ(z).
pub fn digamma(mut z: C64) -> C64 {
    if z.re < 0.5 {
        // ψ(1−z) − ψ(z) = π cot πz
        let s = z * PI;
        return digamma(1.0 - z) - PI * s.cos() / s.sin();
    }
    let mut acc = C64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // Bernoulli tail B_{2k}/(2k z^{2k})
    const B: [f64; 7] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
    let z2 = 1.0 / (z * z);
    let mut p = z2;
    let mut tail = C64::new(0.0, 0.0);
    for (k, b) in B.iter().enumerate() {
        tail += *b / (2.0 * (k + 1) as f64) * p;
        p *= z2;
    }
    acc + z.ln() - 0.5 / z - tail
}
