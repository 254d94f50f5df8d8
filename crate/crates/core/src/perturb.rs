//! The forward perturbation `J -> J~` and its parameter algebra.

use crate::error::{Result, SpectralError};
use crate::green::rational_n;
use crate::model::{validate_jacobi, JacobiMatrix, PerturbationParams, Spectrum};
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

/// Builds the parameter triple from `(theta_sq, K)`; `M = (1/theta_sq - 1) K`.
pub fn perturbation_from<T: Real>(theta_sq: T, k: T, site: usize) -> Result<PerturbationParams<T>> {
    if !(theta_sq > T::zero() && theta_sq < T::one()) {
        return Err(SpectralError::InvalidTheta(theta_sq.as_f64()));
    }
    let m = (theta_sq.recip() - T::one()) * k;
    Ok(PerturbationParams { site, theta_sq, k, m })
}

/// `a~_n = theta^2 (a_n + M)`, `b~_{n-1} = theta b_{n-1}`, `b~_n = theta b_n`;
/// every other entry is copied.
pub fn apply_perturbation<T: Real>(j: &JacobiMatrix<T>, p: &PerturbationParams<T>) -> Result<JacobiMatrix<T>> {
    let report = validate_jacobi(j);
    if !report.is_valid() {
        return Err(SpectralError::Invalid(report));
    }
    j.check_site(p.site)?;
    if !(p.theta_sq > T::zero() && p.theta_sq < T::one()) {
        return Err(SpectralError::InvalidTheta(p.theta_sq.as_f64()));
    }
    let theta = p.theta();
    let n = p.site;
    let (mut a, mut b) = j.clone().into_parts();
    a[n] = p.theta_sq * (a[n] + p.m);
    if n > 0 {
        b[n - 1] = theta * b[n - 1];
    }
    if n + 1 < a.len() {
        b[n] = theta * b[n];
    }
    Ok(JacobiMatrix::new_unchecked(a, b))
}

/// `thetaSq = N(x*)`, the mass ratio read off at an unmovable point or at `K`.
///
/// Factors `(x* - sigma_j) / (x* - sigma_hat_j)` that coincide at tolerance
/// are cancelled before dividing.
pub fn mass_ratio_from_unmovable<T: Real>(
    sigma: &Spectrum<T>,
    sigma_hat: &Spectrum<T>,
    x_star: T,
    tol: &TolerancePolicy<T>,
) -> Result<T> {
    rational_n(sigma, sigma_hat, x_star, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_a, fixture_b, fixture_d};

    #[test]
    fn parameter_algebra() {
        assert_eq!(perturbation_from(0.5, 0.0, 0).unwrap().m, 0.0);
        assert_eq!(perturbation_from(0.5, -1.0, 0).unwrap().m, -1.0);
        assert_eq!(perturbation_from(0.25, 1.0, 0).unwrap().m, 3.0);
        assert!(matches!(perturbation_from(1.0, 1.0, 0), Err(SpectralError::InvalidTheta(_))));
        assert!(perturbation_from(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn fixture_perturbations() {
        for f in [fixture_a::<f64>(), fixture_b()] {
            let jt = apply_perturbation(&f.j, &f.params).unwrap();
            assert!(jt.max_abs_diff(&f.j_tilde) < 1e-15, "fixture {}", f.name);
        }
        let j = JacobiMatrix::new(vec![3.0], vec![]).unwrap();
        let p = perturbation_from(0.5, 1.0, 0).unwrap();
        assert_eq!(apply_perturbation(&j, &p).unwrap().diag(), &[2.0]);
    }

    #[test]
    fn only_local_entries_change() {
        let j = JacobiMatrix::new(vec![1.0f64, 2.0, 3.0, 4.0, 5.0], vec![-1.0, -2.0, -3.0, -4.0]).unwrap();
        let p = perturbation_from(0.36, 0.7, 2).unwrap();
        let jt = apply_perturbation(&j, &p).unwrap();
        assert_eq!(&jt.diag()[..2], &[1.0, 2.0]);
        assert_eq!(&jt.diag()[3..], &[4.0, 5.0]);
        assert_eq!(jt.offdiag()[0], -1.0);
        assert_eq!(jt.offdiag()[3], -4.0);
        assert!((jt.offdiag()[1] + 1.2).abs() < 1e-15);
        assert!((jt.offdiag()[2] + 1.8).abs() < 1e-15);
        assert!(jt.offdiag().iter().all(|b| *b < 0.0));
    }

    #[test]
    fn mass_ratio_examples() {
        let tol = TolerancePolicy::default();
        let b = fixture_b::<f64>().data();
        let r = mass_ratio_from_unmovable(&b.sigma, &b.sigma_hat, 2.0, &tol).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
        let a = fixture_a::<f64>().data();
        let r = mass_ratio_from_unmovable(&a.sigma, &a.sigma_hat, 0.0, &tol).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
        let d = fixture_d::<f64>().data();
        let r = mass_ratio_from_unmovable(&d.sigma, &d.sigma_hat, 1.0, &tol).unwrap();
        assert!((r - 0.75).abs() < 1e-12);
        // 3 is in sigma but not in sigma_hat.
        assert!(matches!(
            mass_ratio_from_unmovable(&d.sigma, &d.sigma_hat, 3.0, &tol),
            Err(SpectralError::PoleAtPoint(_))
        ));
    }
}
