//! Scalar abstraction for the geometry kernel.
//!
//! The low-level geometry is generic over any IEEE float; the rest of the
//! crate pins `f64` through the aliases exported at the crate root.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the geometry kernel: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Shorthand for lossless-enough literal injection.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    /// Round-trip through `f64`, exact for `f32` and `f64`.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}
