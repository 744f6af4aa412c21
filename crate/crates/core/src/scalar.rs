//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar the physics is generic over (`f32` or `f64`).
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Debug + Display + Default {
    /// Convert an `f64` literal. Never fails for the supported float types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion used for error reporting and emission.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Convert an index or count.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `√2 · e^(-1/2)`, the supremum of `u · exp(-u²/4)` on `u ≥ 0`.
#[inline]
pub(crate) fn gaussian_ramp_supremum<T: Real>() -> T {
    T::SQRT_2() * T::lit(-0.5).exp()
}
