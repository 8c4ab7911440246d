//! Floating-point abstraction shared by every module.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, NumAssignOps};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A real number type the optimizer, samplers and simulators can run on.
///
/// Implemented for `f32` and `f64`. Literals are written as `T::lit(0.25)`.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssignOps
    + Debug
    + Display
    + LowerExp
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        Self::from(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn squared(self) -> Self {
        self * self
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + NumAssignOps
        + Debug
        + Display
        + LowerExp
        + Default
        + Serialize
        + DeserializeOwned
        + Send
        + Sync
        + 'static
{
}

/// Formats a value with 17 significant digits in scientific notation.
///
/// This is the text form used by every CSV and stdout writer in the workspace;
/// it round-trips `f64` exactly.
pub fn fmt17<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}
