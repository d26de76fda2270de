//! Embedded Dormand–Prince 5(4) stepper for complex first-order systems,
//! with cubic Hermite dense output between accepted steps.

use crate::scalar::Scalar;
use num_complex::Complex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// Right-hand side y′ = F(t, y) of an N-component complex system.
pub trait System<T: Scalar, const N: usize> {
    fn rhs(&self, t: T, y: &[Complex<T>; N]) -> [Complex<T>; N];
}

impl<T: Scalar, const N: usize, F> System<T, N> for F
where
    F: Fn(T, &[Complex<T>; N]) -> [Complex<T>; N],
{
    fn rhs(&self, t: T, y: &[Complex<T>; N]) -> [Complex<T>; N] {
        self(t, y)
    }
}

/// How the local error estimate is compared with `tol`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    /// Error per step ≤ tol.
    PerStep,
    /// Error per unit step ≤ tol·|h|; global error then scales faster than tol.
    PerUnitStep,
}

#[derive(Clone, Copy, Debug)]
pub struct Options<T> {
    /// Error target, mixed absolute/relative.
    pub tol: T,
    pub control: Control,
    pub max_steps: usize,
    pub h_max: Option<T>,
}

impl<T: Scalar> Options<T> {
    pub fn new(tol: T) -> Self {
        Self { tol, control: Control::PerStep, max_steps: 20_000_000, h_max: None }
    }

    pub fn per_unit_step(mut self) -> Self {
        self.control = Control::PerUnitStep;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Accepted steps in integration order, with derivatives for interpolation.
#[derive(Clone, Debug)]
pub struct Solution<T: Scalar, const N: usize> {
    pub t: Vec<T>,
    pub y: Vec<[Complex<T>; N]>,
    pub dy: Vec<[Complex<T>; N]>,
    pub stats: Stats,
    pub tol: T,
}

impl<T: Scalar, const N: usize> Solution<T, N> {
    pub fn last(&self) -> (T, [Complex<T>; N]) {
        (*self.t.last().unwrap(), *self.y.last().unwrap())
    }

    pub fn t_start(&self) -> T {
        self.t[0]
    }

    pub fn t_end(&self) -> T {
        *self.t.last().unwrap()
    }

    /// Cubic Hermite interpolant; `t` is clamped to the integrated span.
    pub fn at(&self, t: T) -> [Complex<T>; N] {
        let n = self.t.len();
        if n == 1 {
            return self.y[0];
        }
        let forward = self.t[n - 1] > self.t[0];
        let key = |x: T| if forward { x } else { -x };
        let tk = key(t);
        let i = match self.t.binary_search_by(|p| key(*p).partial_cmp(&tk).unwrap()) {
            Ok(i) => return self.y[i],
            Err(0) => return self.y[0],
            Err(i) if i >= n => return self.y[n - 1],
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let one = T::one();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = (one + two * s) * (one - s) * (one - s);
        let h10 = s * (one - s) * (one - s);
        let h01 = s * s * (three - two * s);
        let h11 = s * s * (s - one);
        std::array::from_fn(|k| self.y[i][k] * h00 + self.dy[i][k] * (h10 * h) + self.y[i + 1][k] * h01 + self.dy[i + 1][k] * (h11 * h))
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

fn finite<T: Scalar, const N: usize>(y: &[Complex<T>; N]) -> bool {
    y.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Integrate from `t0` to `t1` (either direction).
pub fn integrate<T: Scalar, S: System<T, N>, const N: usize>(
    sys: &S,
    t0: T,
    t1: T,
    y0: [Complex<T>; N],
    opts: &Options<T>,
) -> Result<Solution<T, N>, OdeError> {
    if !(opts.tol > T::zero()) {
        return Err(OdeError::BadTolerance);
    }
    let tof = |x: T| x.to_f64().unwrap_or(f64::NAN);
    if !finite(&y0) {
        return Err(OdeError::NonFinite { t: tof(t0) });
    }
    let span = t1 - t0;
    let dir = if span >= T::zero() { T::one() } else { -T::one() };
    let lit = T::lit;
    let a: Vec<Vec<T>> = A.iter().map(|r| r.iter().map(|&x| lit(x)).collect()).collect();
    let c: Vec<T> = C.iter().map(|&x| lit(x)).collect();
    let e: Vec<T> = E.iter().map(|&x| lit(x)).collect();
    let tol = opts.tol;
    let zero = Complex::new(T::zero(), T::zero());

    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = y0;
    let mut f = sys.rhs(t, &y);
    stats.rhs_evals += 1;
    let mut sol = Solution { t: vec![t0], y: vec![y0], dy: vec![f], stats, tol };
    if span == T::zero() {
        return Ok(sol);
    }

    // initial step from the local scale of y and y′
    let ny = y.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let nf = f.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let mut h = if nf > T::zero() { lit(0.01) * (ny + tol.sqrt()) / nf } else { span.abs() * lit(1e-3) };
    h = h.min(span.abs()).max(span.abs() * lit(1e-12));
    if let Some(hm) = opts.h_max {
        h = h.min(hm);
    }

    let mut k = [[zero; N]; 7];
    let mut err_prev = lit(1e-4);
    let q = match opts.control {
        Control::PerStep => lit(5.0),
        Control::PerUnitStep => lit(4.0),
    };
    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= T::zero() {
            break;
        }
        if sol.stats.accepted + sol.stats.rejected >= opts.max_steps {
            return Err(OdeError::TooManySteps(opts.max_steps));
        }
        let mut last = false;
        if h >= remaining {
            h = remaining;
            last = true;
        }
        let hs = h * dir;
        k[0] = f;
        for s in 1..7 {
            let mut ys = y;
            for j in 0..s {
                if a[s][j] != T::zero() {
                    for m in 0..N {
                        ys[m] = ys[m] + k[j][m] * (hs * a[s][j]);
                    }
                }
            }
            k[s] = sys.rhs(t + c[s] * hs, &ys);
        }
        sol.stats.rhs_evals += 6;
        let mut yn = y;
        for m in 0..N {
            let mut acc = zero;
            for s in 0..6 {
                acc = acc + k[s][m] * a[6][s];
            }
            yn[m] = y[m] + acc * hs;
        }
        let mut err = T::zero();
        for m in 0..N {
            let mut em = zero;
            for s in 0..7 {
                em = em + k[s][m] * e[s];
            }
            let mut sc = tol * (T::one() + y[m].norm().max(yn[m].norm()));
            if opts.control == Control::PerUnitStep {
                sc = sc * h;
            }
            let r = (em * hs).norm() / sc;
            err = err.max(r);
        }
        if !err.is_finite() {
            if !finite(&yn) && h < lit(1e-300) {
                return Err(OdeError::NonFinite { t: tof(t) });
            }
            h = h * lit(0.1);
            sol.stats.rejected += 1;
            continue;
        }
        if err <= T::one() {
            t = if last { t1 } else { t + hs };
            y = yn;
            f = k[6];
            if !finite(&y) {
                return Err(OdeError::NonFinite { t: tof(t) });
            }
            sol.t.push(t);
            sol.y.push(y);
            sol.dy.push(f);
            sol.stats.accepted += 1;
            // PI controller
            let fac = lit(0.9) * err.max(lit(1e-10)).powf(lit(-0.7) / q) * err_prev.powf(lit(0.4) / q);
            h = h * fac.min(lit(5.0)).max(lit(0.2));
            err_prev = err.max(lit(1e-4));
        } else {
            let fac = lit(0.9) * err.powf(-T::one() / q);
            h = h * fac.max(lit(0.2));
            sol.stats.rejected += 1;
        }
        if let Some(hm) = opts.h_max {
            h = h.min(hm);
        }
        let floor = lit(16.0) * T::epsilon() * t.abs().max(T::one());
        if h < floor && (t1 - t) * dir > floor {
            return Err(OdeError::StepUnderflow { t: tof(t) });
        }
    }
    Ok(sol)
}
