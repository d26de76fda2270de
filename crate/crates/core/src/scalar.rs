//! Scalar plumbing shared by the generic kernels.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::Debug;

/// Floating-point type the generic kernels (stepper, summation) run on.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable literal")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Neumaier-compensated running sum of complex terms.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<T: Scalar> {
    sum: Complex<T>,
    comp: Complex<T>,
}

impl<T: Scalar> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { sum: z, comp: z }
    }

    pub fn add(&mut self, x: Complex<T>) {
        let (re, cre) = two_sum(self.sum.re, x.re);
        let (im, cim) = two_sum(self.sum.im, x.im);
        self.sum = Complex::new(re, im);
        self.comp = self.comp + Complex::new(cre, cim);
    }

    pub fn value(&self) -> Complex<T> {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let err = if a.abs() >= b.abs() { (a - s) + b } else { (b - s) + a };
    (s, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut s = CompensatedSum::<f64>::new();
        s.add(Complex::new(1.0, 0.0));
        for _ in 0..1000 {
            s.add(Complex::new(1e-17, 0.0));
        }
        s.add(Complex::new(-1.0, 0.0));
        assert!((s.value().re - 1e-14).abs() < 1e-26);
    }

    #[test]
    fn works_in_single_precision() {
        let mut s = CompensatedSum::<f32>::new();
        for _ in 0..10 {
            s.add(Complex::new(0.1, -0.1));
        }
        assert!((s.value().re - 1.0).abs() < 1e-6);
    }
}
