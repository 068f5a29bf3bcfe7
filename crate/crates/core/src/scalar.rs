//! Floating scalar abstraction shared by every numerical kernel.
//!
//! `Scalar` is the one bound used throughout the crate: an IEEE float that
//! rustfft can transform and num-traits can do generic math on. Only `f32`
//! and `f64` implement it; acceptance tolerances assume `f64`.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rustfft::FftNum;

pub trait Scalar:
    Float + FloatConst + FftNum + FromPrimitive + NumAssign + Default + std::fmt::LowerExp
{
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite literal")
    }
    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Shorthand for promoting an `f64` literal into the working scalar type.
#[inline]
pub fn r<T: Scalar>(x: f64) -> T {
    T::from_f64_lossy(x)
}

/// Complex number over the working scalar.
pub type C<T> = Complex<T>;

/// Unit imaginary.
#[inline]
pub fn im<T: Scalar>() -> C<T> {
    C::new(T::zero(), T::one())
}

/// `e^{iφ}` for real `φ`.
#[inline]
pub fn cis<T: Scalar>(phi: T) -> C<T> {
    C::new(phi.cos(), phi.sin())
}
