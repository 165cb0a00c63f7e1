use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// floating point length type: f32 or f64
pub trait Scalar: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// relative slack for inequality checks
    const SLACK: f64;
    /// absolute tolerance on the total of a probability measure
    const MEASURE_TOL: f64;
}

impl Scalar for f64 {
    const SLACK: f64 = 1e-9;
    const MEASURE_TOL: f64 = 1e-12;
}

impl Scalar for f32 {
    const SLACK: f64 = 1e-5;
    const MEASURE_TOL: f64 = 1e-5;
}

/// Lossless-enough conversion from f64 constants.
#[inline]
pub fn sc<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("representable constant")
}

#[inline]
pub fn from_usize<T: Scalar>(x: usize) -> T {
    T::from_usize(x).expect("representable count")
}

/// `a <= b` up to the relative slack of `T`.
#[inline]
pub fn leq<T: Scalar>(a: T, b: T) -> bool {
    a <= b + sc::<T>(T::SLACK) * b.abs()
}

#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
