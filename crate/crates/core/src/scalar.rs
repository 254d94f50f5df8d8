//! Scalar abstractions.
//!
//! Two tiers are used across the crate. [`Field`] is enough for anything that
//! only adds, multiplies and divides (polynomial recurrences, the Euclid
//! continued fraction) and is implemented by exact rationals as well as
//! floats. [`Real`] adds ordering, square roots and transcendental helpers and
//! is what the eigensolver and the inverse reconstruction need.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Exact or inexact field arithmetic.
pub trait Field: Num + Signed + Clone + PartialOrd + Debug {}

impl<T> Field for T where T: Num + Signed + Clone + PartialOrd + Debug {}

/// floating point: f32 or f64
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Signed + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64`, used for diagnostics.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
