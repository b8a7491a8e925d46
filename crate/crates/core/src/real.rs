//! Scalar abstraction for the numerical core.
//!
//! All physics and fitting routines are generic over [`Real`] so the same
//! code runs in `f32` or `f64`. The crate-level type aliases pin the default
//! precision to `f64`, which is what every shipped tolerance assumes.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + Sum
    + Send
    + Sync
    + Debug
    + Display
    + LowerExp
    + 'static
{
    /// Lossless conversion from an `f64` literal (constants, config values).
    fn of(v: f64) -> Self;
}

impl Real for f32 {
    fn of(v: f64) -> Self {
        v as f32
    }
}

impl Real for f64 {
    fn of(v: f64) -> Self {
        v
    }
}
