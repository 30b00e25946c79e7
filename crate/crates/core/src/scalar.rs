//! Scalar abstraction so the whole crate works with `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating-point scalar used throughout the crate.
///
/// Implemented for `f32` and `f64`. The default tolerances baked into the
/// various config types are chosen for `f64`; when instantiating the crate
/// with `f32`, pass tolerances appropriate for single precision instead.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + 'static
{
    /// Lossy cast from `f64`; used for literals and default tolerances.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal converts to any Real")
    }

    /// Cast from an index or count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to any Real")
    }

    /// Lossy cast to `f64`; used for diagnostics and error payloads.
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Wrap an angle to `[0, 2π)`.
pub fn wrap_angle<T: Real>(phi: T) -> T {
    let tau = T::TAU();
    let r = phi % tau;
    if r < T::zero() {
        r + tau
    } else {
        r
    }
}
