//! Scalar abstraction for the numeric core.
//!
//! Everything in this crate is written against [`Real`], a thin bundle of
//! `num-traits` bounds satisfied by `f32` and `f64`. The crate root exports
//! `f64`-concrete aliases for the common types; `f32` instantiations compile
//! and run at correspondingly reduced accuracy.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign, NumCast};

/// Floating-point scalar usable throughout the numeric core.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Default + Debug + Display + 'static
{
    /// Lossy conversion from an `f64` literal (tolerances, reference values).
    fn of(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("finite f64 constant")
    }

    /// Conversion from a small integer count.
    fn of_usize(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("usize fits in scalar")
    }

    /// Conversion to `f64` for reporting.
    fn to_f64(self) -> f64 {
        <f64 as NumCast>::from(self).expect("scalar fits in f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// n! as a scalar; exact for every n that matters here (n ≤ 170 in f64).
pub fn factorial<T: Real>(n: usize) -> T {
    let mut acc = T::one();
    for k in 2..=n {
        acc = acc * T::of_usize(k);
    }
    acc
}

/// Binomial coefficient C(n, k) as a scalar.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::of_usize(n - i) / T::of_usize(i + 1);
    }
    acc
}
