//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point scalar (`f32` or `f64`).
///
/// Tolerances that the library treats as absolute constants are exposed per type so that
/// single-precision builds use thresholds they can actually meet.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance for Hermiticity and unit-trace checks.
    fn herm_tol() -> Self;

    /// Relative scale used for positivity and support thresholds (multiplied by `dim·‖A‖`).
    fn psd_rel() -> Self;

    /// Convert an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn herm_tol() -> Self {
        1e-9
    }
    fn psd_rel() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn herm_tol() -> Self {
        1e-4
    }
    fn psd_rel() -> Self {
        1e-5
    }
}

/// Complex scalar over [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn ci<T: Real>(im: T) -> C<T> {
    Complex::new(T::zero(), im)
}
