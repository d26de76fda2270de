//! Adaptive quadrature of complex-valued integrands.

use crate::C64;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not reach tolerance {tol:e} within {budget} subdivisions (estimate {err:e})")]
    Budget { tol: f64, budget: usize, err: f64 },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn kronrod<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> Result<(C64, f64), QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !(fc.re.is_finite() && fc.im.is_finite()) {
        return Err(QuadError::NonFinite(c));
    }
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        if !(f1.re.is_finite() && f1.im.is_finite() && f2.re.is_finite() && f2.im.is_finite()) {
            return Err(QuadError::NonFinite(c + x));
        }
        k += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    Ok((k * h, ((k - g) * h).norm()))
}

struct Piece {
    a: f64,
    b: f64,
    val: C64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Adaptive Gauss–Kronrod (7/15) on [a, b] to absolute error `tol`.
/// Returns the integral and the error estimate.
pub fn gauss_kronrod<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<(C64, f64), QuadError> {
    let (v, e) = kronrod(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, val: v, err: e });
    let (mut total, mut err) = (v, e);
    let mut n = 1;
    while err > tol {
        if n >= budget {
            return Err(QuadError::Budget { tol, budget, err });
        }
        let p = heap.pop().expect("non-empty");
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = kronrod(&f, p.a, m)?;
        let (v2, e2) = kronrod(&f, m, p.b)?;
        total += v1 + v2 - p.val;
        err += e1 + e2 - p.err;
        heap.push(Piece { a: p.a, b: m, val: v1, err: e1 });
        heap.push(Piece { a: m, b: p.b, val: v2, err: e2 });
        n += 1;
        if n % 64 == 0 {
            // refresh sums to keep the running totals honest
            total = heap.iter().map(|p| p.val).sum();
            err = heap.iter().map(|p| p.err).sum();
        }
    }
    let total: C64 = heap.iter().map(|p| p.val).sum();
    Ok((total, err))
}

/// ∫ g(z) dz along the straight segment from `za` to `zb`.
pub fn segment<F: Fn(C64) -> C64>(g: F, za: C64, zb: C64, tol: f64, budget: usize) -> Result<(C64, f64), QuadError> {
    let d = zb - za;
    gauss_kronrod(|s| g(za + d * s) * d, 0.0, 1.0, tol, budget)
}

/// Romberg extrapolation of the composite midpoint rule; an independent
/// cross-check for smooth integrands.
pub fn romberg_midpoint<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, tol: f64, max_levels: usize) -> Result<C64, QuadError> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    let mut n = 1usize;
    for level in 0..max_levels {
        let h = (b - a) / n as f64;
        let mut s = C64::new(0.0, 0.0);
        for i in 0..n {
            s += f(a + (i as f64 + 0.5) * h);
        }
        let mut row = vec![s * h];
        for j in 1..=level {
            let p = 9f64.powi(j as i32);
            let prev = &rows[level - 1];
            row.push((p * row[j - 1] - prev[j - 1]) / (p - 1.0));
        }
        if level > 2 {
            let prev = &rows[level - 1];
            if (row[level] - prev[level - 1]).norm() <= tol {
                return Ok(row[level]);
            }
        }
        rows.push(row);
        n *= 3;
        if n > 20_000_000 {
            break;
        }
    }
    let last = rows.last().map(|r| *r.last().unwrap()).unwrap_or_default();
    Err(QuadError::Budget { tol, budget: max_levels, err: last.norm() })
}
