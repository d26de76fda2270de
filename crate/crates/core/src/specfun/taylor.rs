//! Taylor-series continuation for y″ = (p₀ + p₁z + p₂z²)·y along a segment.
//! Used to carry a recessive solution inward from the asymptotic circle
//! where its Maclaurin series cancels too badly.

use crate::C64;

pub(crate) fn continue_quadratic(p: [C64; 3], z0: C64, y0: C64, yp0: C64, z1: C64) -> (C64, C64) {
    let span = z1 - z0;
    let len = span.norm();
    if len == 0.0 {
        return (y0, yp0);
    }
    let mut z = z0;
    let (mut y, mut yp) = (y0, yp0);
    let mut done = 0.0;
    while done < len {
        let q0 = p[0] + p[1] * z + p[2] * z * z;
        let k = q0.norm().sqrt().max(1.0);
        let step = (0.5 / k).min(0.5).min(len - done);
        let h = span / len * step;
        let (ny, nyp) = taylor_step(p, z, y, yp, h);
        y = ny;
        yp = nyp;
        z += h;
        done += step;
    }
    (y, yp)
}

fn taylor_step(p: [C64; 3], z0: C64, y0: C64, yp0: C64, h: C64) -> (C64, C64) {
    let q0 = p[0] + p[1] * z0 + p[2] * z0 * z0;
    let q1 = p[1] + 2.0 * p[2] * z0;
    let q2 = p[2];
    let zero = C64::new(0.0, 0.0);
    // a[n] scaled by h^n to keep magnitudes tame
    let mut a: Vec<C64> = vec![y0, yp0 * h];
    let h2 = h * h;
    let mut y = a[0] + a[1];
    let mut yp = a[1];
    let scale = y0.norm() + (yp0 * h).norm();
    let mut small = 0;
    for n in 0..200usize {
        let an = a[n];
        let an1 = if n >= 1 { a[n - 1] } else { zero };
        let an2 = if n >= 2 { a[n - 2] } else { zero };
        let next = (q0 * an * h2 + q1 * an1 * h2 * h + q2 * an2 * h2 * h2) / (((n + 2) * (n + 1)) as f64);
        a.push(next);
        y += next;
        yp += next * (n + 2) as f64;
        if next.norm() * (n + 2) as f64 <= 1e-18 * scale.max(y.norm()) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (y, yp / h)
}
