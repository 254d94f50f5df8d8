//! Small hand-checkable instances.
//!
//! Every value below follows from factoring a characteristic polynomial of
//! degree at most three by hand.
//!
//! | name | J | site | thetaSq | K | sigma | sigma_hat |
//! |------|---|------|---------|---|-------|-----------|
//! | A | a=[2,2], b=[-1] | 0 | 1/2 | 0 | {1,3} | {(3-sqrt3)/2, (3+sqrt3)/2} |
//! | B | a=[2,2,2], b=[-1,-1] | 1 | 1/2 | -1 | {2-sqrt2, 2, 2+sqrt2} | {0, 2, 2.5} |
//! | C | as B | 1 | 1/2 | 2 | as B | {1, 2, 3} |
//! | D | as A | 0 | 1/2 | 1 | {1,3} | {1, 2.5} |

use crate::model::{JacobiMatrix, PerturbationParams, SpectralData, Spectrum};
use crate::perturb::perturbation_from;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct Fixture<T> {
    pub name: &'static str,
    pub j: JacobiMatrix<T>,
    pub params: PerturbationParams<T>,
    pub j_tilde: JacobiMatrix<T>,
    pub sigma: Vec<T>,
    pub sigma_hat: Vec<T>,
}

impl<T: Real> Fixture<T> {
    /// Spectral data with `theta_sq` left unspecified.
    pub fn data(&self) -> SpectralData<T> {
        SpectralData {
            sigma: Spectrum::new_unchecked(self.sigma.clone()),
            sigma_hat: Spectrum::new_unchecked(self.sigma_hat.clone()),
            k: self.params.k,
            site: self.params.site,
            theta_sq: None,
        }
    }

    pub fn data_with_theta(&self) -> SpectralData<T> {
        SpectralData { theta_sq: Some(self.params.theta_sq), ..self.data() }
    }
}

fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

fn jacobi<T: Real>(a: &[f64], b: &[f64]) -> JacobiMatrix<T> {
    JacobiMatrix::new(a.iter().map(|x| lit(*x)).collect(), b.iter().map(|x| lit(*x)).collect())
        .expect("fixture matrices are valid")
}

fn j_a<T: Real>() -> JacobiMatrix<T> {
    jacobi(&[2.0, 2.0], &[-1.0])
}

fn j_b<T: Real>() -> JacobiMatrix<T> {
    jacobi(&[2.0, 2.0, 2.0], &[-1.0, -1.0])
}

fn params<T: Real>(theta_sq: f64, k: f64, site: usize) -> PerturbationParams<T> {
    perturbation_from(lit(theta_sq), lit(k), site).expect("fixture parameters are valid")
}

/// K outside both spectra, no unmovable points.
pub fn fixture_a<T: Real>() -> Fixture<T> {
    let r3 = 3f64.sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Fixture {
        name: "A",
        j: j_a(),
        params: params(0.5, 0.0, 0),
        j_tilde: jacobi(&[1.0, 2.0], &[-h]),
        sigma: vec![lit(1.0), lit(3.0)],
        sigma_hat: vec![lit((3.0 - r3) / 2.0), lit((3.0 + r3) / 2.0)],
    }
}

/// K outside both spectra, one unmovable eigenvalue at 2.
pub fn fixture_b<T: Real>() -> Fixture<T> {
    let r2 = 2f64.sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Fixture {
        name: "B",
        j: j_b(),
        params: params(0.5, -1.0, 1),
        j_tilde: jacobi(&[2.0, 0.5, 2.0], &[-h, -h]),
        sigma: vec![lit(2.0 - r2), lit(2.0), lit(2.0 + r2)],
        sigma_hat: vec![lit(0.0), lit(2.0), lit(2.5)],
    }
}

/// K = 2 is a common point and a zero of G (the IV.b branch).
pub fn fixture_c<T: Real>() -> Fixture<T> {
    let r2 = 2f64.sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Fixture {
        name: "C",
        j: j_b(),
        params: params(0.5, 2.0, 1),
        j_tilde: jacobi(&[2.0, 2.0, 2.0], &[-h, -h]),
        sigma: vec![lit(2.0 - r2), lit(2.0), lit(2.0 + r2)],
        sigma_hat: vec![lit(1.0), lit(2.0), lit(3.0)],
    }
}

/// K = 1 is a common point and a pole of G (the IV.a branch).
pub fn fixture_d<T: Real>() -> Fixture<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Fixture {
        name: "D",
        j: j_a(),
        params: params(0.5, 1.0, 0),
        j_tilde: jacobi(&[1.5, 2.0], &[-h]),
        sigma: vec![lit(1.0), lit(3.0)],
        sigma_hat: vec![lit(1.0), lit(2.5)],
    }
}

pub fn all<T: Real>() -> [Fixture<T>; 4] {
    [fixture_a(), fixture_b(), fixture_c(), fixture_d()]
}
