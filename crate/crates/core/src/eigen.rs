//! Eigenvalues by Sturm counting and bisection, and eigenvector weights at a
//! site from the first-kind recurrence.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::model::{validate_jacobi, JacobiMatrix, Spectrum};
use crate::poly::eval_first_kind;
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

/// Eigenvalues with the squared eigenvector components `|psi_k(site)|^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSpectrum<T> {
    pub values: Spectrum<T>,
    pub weights: Vec<T>,
    pub site: usize,
}

impl<T: Real> WeightedSpectrum<T> {
    /// Weights below `rel_tol` count as exact zeros.
    pub fn vanishes(&self, k: usize, tol: &TolerancePolicy<T>) -> bool {
        self.weights[k] < tol.rel_tol
    }
}

/// Number of negative pivots of `J - x = L D L^T`, or `None` when a pivot is
/// exactly zero.
fn negative_pivots<T: Real>(j: &JacobiMatrix<T>, x: T) -> Option<usize> {
    let (a, b) = (j.diag(), j.offdiag());
    let mut count = 0;
    let mut d = a[0] - x;
    for i in 0..j.dim() {
        if i > 0 {
            d = (a[i] - x) - b[i - 1] * b[i - 1] / d;
        }
        if d == T::zero() {
            return None;
        }
        if d < T::zero() {
            count += 1;
        }
    }
    Some(count)
}

/// `#{eigenvalues of J strictly below x}` under the default tolerances.
pub fn sturm_count<T: Real>(j: &JacobiMatrix<T>, x: T) -> Result<usize> {
    sturm_count_with(j, x, &TolerancePolicy::default())
}

/// `#{eigenvalues of J strictly below x}`.
///
/// A zero pivot means `x` is an eigenvalue of a leading block; the count is
/// then taken at `x - eigen_tol * spread` (and at `x + eigen_tol * spread` if
/// that breaks down too). [`SpectralError::BreakdownAtPivot`] is returned
/// only if every shifted point also hits a zero pivot.
pub fn sturm_count_with<T: Real>(j: &JacobiMatrix<T>, x: T, tol: &TolerancePolicy<T>) -> Result<usize> {
    if !x.is_finite() {
        return Err(SpectralError::BreakdownAtPivot { x: x.as_f64() });
    }
    if let Some(c) = negative_pivots(j, x) {
        return Ok(c);
    }
    let (lo, hi) = j.gershgorin();
    let delta = tol.eigen_tol * TolerancePolicy::spread([x, lo, hi]);
    [x - delta, x + delta]
        .into_iter()
        .find_map(|y| negative_pivots(j, y))
        .ok_or(SpectralError::BreakdownAtPivot { x: x.as_f64() })
}

/// All eigenvalues in increasing order.
///
/// Each eigenvalue is bracketed inside the Gershgorin interval and bisected
/// on the Sturm count until the bracket cannot shrink further, which is well
/// below `eigen_tol * spread`.
pub fn eigenvalues<T: Real>(j: &JacobiMatrix<T>, tol: &TolerancePolicy<T>) -> Result<Spectrum<T>> {
    let report = validate_jacobi(j);
    if !report.is_valid() {
        return Err(SpectralError::Invalid(report));
    }
    let n = j.dim();
    let (g_lo, g_hi) = j.gershgorin();
    let spread = TolerancePolicy::spread([g_lo, g_hi]);
    let pad = tol.eigen_tol * spread;
    let (lo0, hi0) = (g_lo - pad, g_hi + pad);
    let floor = T::epsilon() * spread;

    let mut values = Vec::with_capacity(n);
    let mut start = lo0;
    for k in 0..n {
        let (mut lo, mut hi) = (start, hi0);
        loop {
            let mid = lo + (hi - lo) / (T::one() + T::one());
            if hi - lo <= floor || mid <= lo || mid >= hi {
                break;
            }
            if sturm_count_with(j, mid, tol)? <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let value = lo + (hi - lo) / (T::one() + T::one());
        if let Some(prev) = values.last() {
            if value <= *prev {
                return Err(SpectralError::NonSimpleSpectrum { index: k - 1, value: value.as_f64() });
            }
        }
        values.push(value);
        start = lo;
    }
    Ok(Spectrum::new_unchecked(values))
}

/// `|psi_k(site)|^2 = P_site(l_k)^2 / sum_l P_l(l_k)^2` for every eigenvalue.
pub fn eigenvector_weights<T: Real>(
    j: &JacobiMatrix<T>,
    site: usize,
    tol: &TolerancePolicy<T>,
) -> Result<WeightedSpectrum<T>> {
    j.check_site(site)?;
    let values = eigenvalues(j, tol)?;
    let weights = values
        .values()
        .iter()
        .map(|&l| {
            let p = eval_first_kind(j, l).values;
            let norm = p.iter().fold(T::zero(), |s, v| s + *v * *v);
            p[site] * p[site] / norm
        })
        .collect();
    Ok(WeightedSpectrum { values, weights, site })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_a, fixture_b};

    fn tol() -> TolerancePolicy<f64> {
        TolerancePolicy::default()
    }

    #[test]
    fn sturm_count_examples() {
        let ja = fixture_a::<f64>().j;
        assert_eq!(sturm_count(&ja, 0.0).unwrap(), 0);
        // x = 2 makes the first pivot exactly zero.
        assert_eq!(sturm_count(&ja, 2.0).unwrap(), 1);
        let one = JacobiMatrix::new(vec![5.0], vec![]).unwrap();
        assert_eq!(sturm_count(&one, 6.0).unwrap(), 1);
        assert_eq!(sturm_count(&one, 5.0).unwrap(), 0);
        assert!(sturm_count(&one, f64::NAN).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let s = eigenvalues(&fixture_a::<f64>().j, &tol()).unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-13 && (s.values()[1] - 3.0).abs() < 1e-13);
        let s = eigenvalues(&fixture_b::<f64>().j, &tol()).unwrap();
        let r2 = 2f64.sqrt();
        for (x, y) in s.values().iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((x - y).abs() < 1e-13);
        }
        let one = JacobiMatrix::new(vec![5.0], vec![]).unwrap();
        assert_eq!(eigenvalues(&one, &tol()).unwrap().values(), &[5.0]);
    }

    #[test]
    fn zero_offdiag_rejected() {
        let j = JacobiMatrix::new_unchecked(vec![1.0, 1.0], vec![0.0]);
        assert!(matches!(eigenvalues(&j, &tol()), Err(SpectralError::Invalid(_))));
    }

    #[test]
    fn weight_examples() {
        let w = eigenvector_weights(&fixture_a::<f64>().j, 0, &tol()).unwrap();
        assert!(w.weights.iter().all(|x| (x - 0.5).abs() < 1e-12));
        let w = eigenvector_weights(&fixture_b::<f64>().j, 1, &tol()).unwrap();
        assert!((w.weights[0] - 0.5).abs() < 1e-12);
        assert!(w.weights[1].abs() < 1e-12 && w.vanishes(1, &tol()));
        assert!((w.weights[2] - 0.5).abs() < 1e-12);
        let one = JacobiMatrix::new(vec![5.0], vec![]).unwrap();
        assert_eq!(eigenvector_weights(&one, 0, &tol()).unwrap().weights, vec![1.0]);
    }

    #[test]
    fn single_precision_runs() {
        let t = TolerancePolicy::<f32>::default();
        let s = eigenvalues(&fixture_b::<f32>().j, &t).unwrap();
        assert!((s.values()[1] - 2.0).abs() < 1e-5);
    }
}
