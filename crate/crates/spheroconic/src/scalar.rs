use std::fmt::{Debug, Display};

use num_traits::float::{Float, FloatConst};

/// Floating-point scalar the library is generic over.
///
/// Everything numerical in this crate works for both `f64` and `f32`,
/// although the documented tolerances (quadrature targets of 1e-10 and the
/// like) assume `f64`. The two conversion methods exist so that algorithm
/// constants can be written once as `f64` literals.
pub trait Real: Float + FloatConst + Debug + Display + 'static {
    /// Convert an `f64` constant into this scalar type (rounding if narrower).
    fn from_f64(x: f64) -> Self;
    /// Widen to `f64`, e.g. for error reports.
    fn into_f64(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn into_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn into_f64(self) -> f64 {
        self as f64
    }
}
