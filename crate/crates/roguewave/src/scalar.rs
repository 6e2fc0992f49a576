//! Scalar abstraction: every solver in this crate is generic over the float
//! width.

use core::fmt::{Debug, Display, LowerExp};
use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
///
/// Accuracy targets throughout the crate (and all default tolerances) are
/// calibrated for `f64`; `f32` is supported but resolves far less of the
/// wave, whose depth variations sit some six orders below the mean depth.
pub trait Real:
    Float + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Lift an `f64` literal into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// Lossy view as `f64`, for diagnostics and error messages.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
