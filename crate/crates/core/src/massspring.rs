//! Spring-mass chains and their Jacobi matrices.
//!
//! Masses `m_0..m_{N-1}` are joined by springs with stiffness-over-length
//! `gamma_1..gamma_{N-1}`; `gamma_0` and `gamma_N` tie the ends to the wall
//! (0 for a free end).

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::model::{validate_jacobi, JacobiMatrix, PerturbationParams};
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassSpringSystem<T> {
    pub masses: Vec<T>,
    pub gammas: Vec<T>,
}

impl<T: Real> MassSpringSystem<T> {
    pub fn validate(&self) -> Result<()> {
        let n = self.masses.len();
        let fail = |msg: String| Err(SpectralError::InvalidSystem(msg));
        if n == 0 {
            return fail("no masses".into());
        }
        if self.gammas.len() != n + 1 {
            return fail(format!("expected {} gammas, got {}", n + 1, self.gammas.len()));
        }
        if let Some(i) = self.masses.iter().position(|m| !(m.is_finite() && *m > T::zero())) {
            return fail(format!("mass {i} must be positive"));
        }
        if let Some(i) = self.gammas.iter().position(|g| !(g.is_finite() && *g >= T::zero())) {
            return fail(format!("gamma {i} must be nonnegative"));
        }
        if let Some(i) = (1..n).find(|&i| self.gammas[i] <= T::zero()) {
            return fail(format!("interior gamma {i} must be positive"));
        }
        if self.gammas.iter().all(|g| *g == T::zero()) {
            return fail("every gamma is zero".into());
        }
        Ok(())
    }
}

/// `a_i = (gamma_i + gamma_{i+1}) / m_i`,
/// `b_i = -gamma_{i+1} / sqrt(m_i m_{i+1})`.
pub fn system_to_jacobi<T: Real>(s: &MassSpringSystem<T>) -> Result<JacobiMatrix<T>> {
    s.validate()?;
    let (m, g) = (&s.masses, &s.gammas);
    let a = (0..m.len()).map(|i| (g[i] + g[i + 1]) / m[i]).collect();
    let b = (0..m.len() - 1).map(|i| -g[i + 1] / (m[i] * m[i + 1]).sqrt()).collect();
    JacobiMatrix::new(a, b)
}

/// The chain with `m_0 = 1` and the given `gamma_0` whose matrix is `j`.
///
/// Runs `gamma_{i+1} = a_i m_i - gamma_i`,
/// `m_{i+1} = gamma_{i+1}^2 / (b_i^2 m_i)`. A final `gamma_N` that is
/// negative by no more than `tol.rel_tol` relative to `a_{N-1} m_{N-1}` is
/// set to zero.
pub fn jacobi_to_system<T: Real>(
    j: &JacobiMatrix<T>,
    gamma0: T,
    tol: &TolerancePolicy<T>,
) -> Result<MassSpringSystem<T>> {
    let report = validate_jacobi(j);
    if !report.is_valid() {
        return Err(SpectralError::Invalid(report));
    }
    if !(gamma0.is_finite() && gamma0 >= T::zero()) {
        return Err(SpectralError::InvalidSystem(format!("gamma0 = {gamma0} must be nonnegative")));
    }
    let (a, b) = (j.diag(), j.offdiag());
    let n = j.dim();
    let mut masses = vec![T::one()];
    let mut gammas = vec![gamma0];
    for i in 0..n {
        let next = a[i] * masses[i] - gammas[i];
        if i + 1 < n {
            if !(next > T::zero()) {
                return Err(SpectralError::NotRealizable(i + 1));
            }
            masses.push(next * next / (b[i] * b[i] * masses[i]));
            gammas.push(next);
        } else {
            let slack = tol.rel_tol * (a[i] * masses[i]).abs().max(gammas[i]);
            if next < -slack {
                return Err(SpectralError::NotRealizable(n));
            }
            gammas.push(next.max(T::zero()));
        }
    }
    Ok(MassSpringSystem { masses, gammas })
}

/// `(m~_n, gamma) = (m_n / theta^2, M m_n)`.
pub fn perturbation_to_physical<T: Real>(p: &PerturbationParams<T>, m_n: T) -> (T, T) {
    (m_n / p.theta_sq, p.m * m_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture_a;
    use crate::perturb::perturbation_from;

    fn sys(m: &[f64], g: &[f64]) -> MassSpringSystem<f64> {
        MassSpringSystem { masses: m.to_vec(), gammas: g.to_vec() }
    }

    #[test]
    fn to_jacobi_examples() {
        let ja = fixture_a::<f64>().j;
        assert_eq!(system_to_jacobi(&sys(&[1.0, 1.0], &[1.0, 1.0, 1.0])).unwrap(), ja);
        assert_eq!(system_to_jacobi(&sys(&[2.0, 2.0], &[2.0, 2.0, 2.0])).unwrap(), ja);
        assert_eq!(system_to_jacobi(&sys(&[1.0], &[1.0, 0.0])).unwrap().diag(), &[1.0]);
        assert!(system_to_jacobi(&sys(&[1.0, 1.0], &[1.0, 0.0, 1.0])).is_err());
        assert!(system_to_jacobi(&sys(&[1.0, -1.0], &[1.0, 1.0, 1.0])).is_err());
    }

    #[test]
    fn to_system_examples() {
        let ja = fixture_a::<f64>().j;
        assert_eq!(
            jacobi_to_system(&ja, 1.0, &TolerancePolicy::default()).unwrap(),
            sys(&[1.0, 1.0], &[1.0, 1.0, 1.0])
        );
        let one = JacobiMatrix::new(vec![1.0], vec![]).unwrap();
        assert_eq!(jacobi_to_system(&one, 1.0, &TolerancePolicy::default()).unwrap(), sys(&[1.0], &[1.0, 0.0]));
        assert!(matches!(
            jacobi_to_system(&ja, 3.0, &TolerancePolicy::default()),
            Err(SpectralError::NotRealizable(1))
        ));
        let free = jacobi_to_system(&ja, 0.0, &TolerancePolicy::default()).unwrap();
        assert_eq!(free.gammas[1], 2.0);
    }

    #[test]
    fn physical_perturbation() {
        let p = perturbation_from(0.5, 0.0, 0).unwrap();
        assert_eq!(perturbation_to_physical(&p, 1.0), (2.0, 0.0));
        let p = perturbation_from(0.5, -1.0, 0).unwrap();
        assert_eq!(perturbation_to_physical(&p, 1.0), (2.0, -1.0));
        let p = perturbation_from(0.25f64, 1.0, 0).unwrap();
        let (mt, g) = perturbation_to_physical(&p, 1.0);
        assert_eq!((mt, g), (4.0, 3.0));
        assert!((p.k * (mt - 1.0) - g).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(sys(&[1.0], &[1.0, 0.0])).unwrap();
        assert_eq!(v, serde_json::json!({"masses": [1.0], "gammas": [1.0, 0.0]}));
    }
}
