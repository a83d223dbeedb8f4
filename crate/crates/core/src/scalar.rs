//! Scalar traits shared by the analytic modules.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num};

/// Ring-like money type: enough for sums, differences and scaling.
///
/// Implemented for the floats and for exact rationals such as
/// `num_rational::Ratio<i64>`.
pub trait Scalar: Num + Copy + PartialOrd + Neg<Output = Self> + Debug {}

impl<T> Scalar for T where T: Num + Copy + PartialOrd + Neg<Output = Self> + Debug {}

/// Floating-point scalar for the closed-form models (logs, roots, powers).
pub trait Real: Scalar + Float + FromPrimitive {
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in target float")
    }
}

impl<T> Real for T where T: Scalar + Float + FromPrimitive {}

/// Rounds money to cents, half away from zero.
pub fn round_cents<T: Real>(x: T) -> T {
    let hundred = T::lit(100.0);
    (x * hundred).round() / hundred
}

/// Rejects NaN and infinities.
pub(crate) fn check_finite<T: Real>(name: &str, x: T) -> crate::Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::input(format!("{name} must be finite")))
    }
}

pub(crate) fn check_non_negative<T: Real>(name: &str, x: T) -> crate::Result<()> {
    check_finite(name, x)?;
    if x < T::zero() {
        return Err(crate::Error::input(format!("{name} must be >= 0")));
    }
    Ok(())
}

pub(crate) fn check_positive<T: Real>(name: &str, x: T) -> crate::Result<()> {
    check_finite(name, x)?;
    if x <= T::zero() {
        return Err(crate::Error::input(format!("{name} must be > 0")));
    }
    Ok(())
}
