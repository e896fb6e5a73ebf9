//! Scalar abstraction for the numeric kernels.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float as NumFloat, FromPrimitive, NumAssignOps};

/// Floating-point scalar the library is generic over: `f32` or `f64`.
///
/// Tolerances throughout the crate are stated as `f64` literals and
/// converted with [`Float::of`]; run anything that matters in `f64`.
pub trait Float:
    NumFloat
    + FromPrimitive
    + NumAssignOps
    + Sum
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` constant.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant must convert")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl<T> Float for T where
    T: NumFloat
        + FromPrimitive
        + NumAssignOps
        + Sum
        + fmt::Debug
        + fmt::Display
        + fmt::LowerExp
        + Send
        + Sync
        + 'static
{
}
