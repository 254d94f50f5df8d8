//! Floating point tie rules.
//!
//! Every comparison of spectral points in the crate goes through
//! [`TolerancePolicy::close`]: two points are equal when they differ by at
//! most `rel_tol * spread`, where the spread is `max(1, max |x|)` over every
//! point taking part in the computation.

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy<T> {
    /// Coincidence and agreement tolerance (relative to the spread).
    pub rel_tol: T,
    /// Target bracket width for eigenvalues (relative to the spread).
    pub eigen_tol: T,
}

impl<T: Real> Default for TolerancePolicy<T> {
    /// `rel_tol = 1e-9`, `eigen_tol = 1e-12` in double precision. Narrower
    /// types get the same values floored at a fixed multiple of their epsilon.
    fn default() -> Self {
        let eps = T::epsilon();
        let eigen_tol = T::lit(1e-12).max(eps * T::lit(16.0));
        let rel_tol = T::lit(1e-9).max(eps * T::lit(1e4));
        Self { rel_tol, eigen_tol }
    }
}

impl<T: Real> TolerancePolicy<T> {
    pub fn new(rel_tol: T, eigen_tol: T) -> Option<Self> {
        let p = Self { rel_tol, eigen_tol };
        p.is_valid().then_some(p)
    }

    /// Same eigenvalue tolerance, different coincidence tolerance. The
    /// eigenvalue tolerance is lowered if needed to keep the policy valid.
    pub fn with_rel_tol(self, rel_tol: T) -> Option<Self> {
        Self::new(rel_tol, self.eigen_tol.min(rel_tol))
    }

    /// `0 < eigen_tol <= rel_tol < 1`.
    pub fn is_valid(&self) -> bool {
        T::zero() < self.eigen_tol && self.eigen_tol <= self.rel_tol && self.rel_tol < T::one()
    }

    /// `max(1, max |x|)` over the given points.
    pub fn spread<I>(points: I) -> T
    where
        I: IntoIterator<Item = T>,
    {
        points.into_iter().fold(T::one(), |acc, x| acc.max(x.abs()))
    }

    #[inline]
    pub fn coincidence(&self, spread: T) -> T {
        self.rel_tol * spread
    }

    #[inline]
    pub fn close(&self, x: T, y: T, spread: T) -> bool {
        (x - y).abs() <= self.rel_tol * spread
    }
}
