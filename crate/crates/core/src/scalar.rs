//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};

/// Real floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssignOps
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal (tolerance, coefficient) into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must be representable")
    }

    /// Converts a count into this scalar.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count must be representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    C::new(T::one(), T::zero())
}

#[inline]
pub(crate) fn ci<T: Real>() -> C<T> {
    C::new(T::zero(), T::one())
}
