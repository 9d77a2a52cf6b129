//! Floating-point scalar abstraction shared by every numeric type in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn count<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// Widens `T` to `f64`.
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().expect("scalar convertible to f64")
}

/// Tolerance used when validating unit-norm and sum-to-one invariants.
///
/// `1e-12` for `f64`, a few hundred ulps for narrower types.
#[inline]
pub fn invariant_tol<T: Scalar>() -> T {
    let floor = lit::<T>(1e-12);
    let ulps = T::epsilon() * lit(64.0);
    floor.max(ulps)
}

/// Looser tolerance for matrix identities (orthogonality, determinants).
#[inline]
pub fn matrix_tol<T: Scalar>() -> T {
    let floor = lit::<T>(1e-10);
    let ulps = T::epsilon() * lit(1024.0);
    floor.max(ulps)
}

#[inline]
pub(crate) fn ln_gamma<T: Scalar>(x: T) -> T {
    lit(statrs::function::gamma::ln_gamma(to_f64(x)))
}
