//! Scalar abstraction for the piecewise-polynomial calculus.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating point scalar usable by [`crate::Piecewise`]: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Relative tolerance used by default for root and mean checks.
    fn default_rel_tol() -> Self;
}

impl Scalar for f32 {
    fn default_rel_tol() -> Self {
        16.0 * f32::EPSILON
    }
}

impl Scalar for f64 {
    fn default_rel_tol() -> Self {
        1e-12
    }
}

/// Converts an `f64` literal into the scalar type.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub(crate) fn as_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
