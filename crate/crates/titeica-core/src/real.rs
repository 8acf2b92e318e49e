//! Scalar abstraction for the whole crate.
//!
//! Every numeric structure here is generic over [`Real`], which is satisfied
//! by `f64` and `f32`. The verification batteries and the CLI pin `f64`;
//! `f32` remains available for quick smoke evaluation where eight digits
//! are enough.

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating point scalar used by jets, solutions and geometry.
pub trait Real:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for embedding an `f64` constant into the working scalar type.
///
/// Conversion from `f64` literals cannot fail for the types this crate
/// supports, so the unwrap is safe by construction.
#[inline]
pub fn cst<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable in scalar type")
}
