//! Scalar abstraction shared by the numerical modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the cross-section and control code is generic over.
///
/// Implemented for `f32` and `f64`. Energy bookkeeping in [`crate::kinematics`]
/// additionally accepts exact rationals.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion of an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance no tighter than what `Self` can resolve.
    ///
    /// Returns `nominal` for `f64`; for narrower types the tolerance is
    /// widened to a small multiple of machine epsilon.
    fn tol(nominal: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(nominal).max(floor)
    }

    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_phase<T: Real>(phi: T) -> T {
    let tau = T::two_pi();
    let mut r = phi % tau;
    if r < T::zero() {
        r = r + tau;
    }
    // `r + tau` can round up to exactly tau for tiny negative inputs.
    if r >= tau {
        r = T::zero();
    }
    r
}

/// Smallest absolute difference between two phases on the circle.
pub fn phase_distance<T: Real>(a: T, b: T) -> T {
    let d = wrap_phase(a - b);
    d.min(T::two_pi() - d)
}
