use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assign::{assemble_solution, count_formula, enumerate_assignments, PoleAssignment};
use super::ghat::{build_ghat, GHatExpansion};
use crate::conditions::{check_conditions, ConditionsReport};
use crate::error::{Result, SpectralError};
use crate::model::{JacobiMatrix, SpectralData};
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Grid points per split parameter.
    pub samples_per_dim: usize,
    pub seed: u64,
    /// Uniformly drawn split points added after the grid.
    pub random_samples: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { samples_per_dim: 3, seed: 0, random_samples: 0 }
    }
}

/// An assignment resolved to pole values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentValues<T> {
    pub minus: Vec<T>,
    pub plus: Vec<T>,
    pub common: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSample<T> {
    pub t: Vec<T>,
    #[serde(rename = "J")]
    pub j: JacobiMatrix<T>,
    #[serde(rename = "J_tilde")]
    pub j_tilde: JacobiMatrix<T>,
    pub spectral_residual: T,
}

/// One manifold of solutions, parametrized by the splits at common poles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFamily<T> {
    pub assignment: AssignmentValues<T>,
    #[serde(skip)]
    pub indices: PoleAssignment,
    pub dimension: usize,
    pub count_formula: String,
    pub samples: Vec<SolutionSample<T>>,
}

impl<T: Real> SolutionFamily<T> {
    /// The pair at arbitrary interior split parameters.
    pub fn sample(
        &self,
        exp: &GHatExpansion<T>,
        t: &[T],
        d: &SpectralData<T>,
        report: &ConditionsReport<T>,
        tol: &TolerancePolicy<T>,
    ) -> Result<SolutionSample<T>> {
        let cls = report
            .classification
            .as_ref()
            .ok_or_else(|| SpectralError::VerificationFailed("data was not classified".into()))?;
        let (j, j_tilde, spectral_residual) = assemble_solution(exp, &self.indices, t, cls, d, tol)?;
        Ok(SolutionSample { t: t.to_vec(), j, j_tilde, spectral_residual })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseOutcome<T> {
    pub report: ConditionsReport<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion: Option<GHatExpansion<T>>,
    pub families: Vec<SolutionFamily<T>>,
}

/// `{1/(s+1), ..., s/(s+1)}^dim` in row-major order.
pub fn t_grid<T: Real>(dim: usize, samples_per_dim: usize) -> Vec<Vec<T>> {
    let s = samples_per_dim.max(1);
    let step = T::from_count(s + 1).recip();
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=s).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(T::from_count(i) * step);
                    p
                })
            })
            .collect();
    }
    out
}

fn random_points<T: Real>(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<T>> {
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    // Open interval: reject the endpoints.
                    let mut u: f64 = rng.gen();
                    while u <= 0.0 {
                        u = rng.gen();
                    }
                    T::lit(u)
                })
                .collect()
        })
        .collect()
}

/// Checks the conditions and, when they hold, enumerates every family of
/// solutions with sampled members.
///
/// Requires `theta_sq` in the data when it is not determined by it (no
/// unmovable points and `K` a common pole of `G`).
pub fn solve_inverse<T: Real>(
    d: &SpectralData<T>,
    options: &SolveOptions,
    tol: &TolerancePolicy<T>,
) -> Result<InverseOutcome<T>> {
    let report = check_conditions(d, tol);
    if !report.pass {
        return Ok(InverseOutcome { report, expansion: None, families: Vec::new() });
    }
    let cls = match &report.classification {
        Some(c) => c.clone(),
        None => {
            let upper =
                crate::green::rational_n(&d.sigma, &d.sigma_hat, d.k, tol).map(|v| v.as_f64()).unwrap_or(f64::NAN);
            return Err(SpectralError::MissingTheta { upper });
        }
    };
    let exp = build_ghat(d, &cls, tol)?;
    let assignments = enumerate_assignments(&exp, &cls)?;
    let (formula, _, _) = count_formula(&exp, &cls);

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let families = assignments
        .into_iter()
        .map(|asg| {
            let dim = asg.dimension();
            let mut points = t_grid::<T>(dim, options.samples_per_dim);
            if dim > 0 {
                points.extend(random_points::<T>(dim, options.random_samples, &mut rng));
            }
            (asg, points)
        })
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(asg, points)| {
            let samples = points
                .iter()
                .map(|t| {
                    let (j, j_tilde, spectral_residual) = assemble_solution(&exp, &asg, t, &cls, d, tol)?;
                    Ok(SolutionSample { t: t.clone(), j, j_tilde, spectral_residual })
                })
                .collect::<Result<Vec<_>>>()?;
            let values = |idx: &[usize]| idx.iter().map(|&i| exp.zeros[i]).collect();
            Ok(SolutionFamily {
                assignment: AssignmentValues {
                    minus: values(&asg.minus),
                    plus: values(&asg.plus),
                    common: values(&asg.common),
                },
                dimension: asg.dimension(),
                count_formula: formula.clone(),
                indices: asg,
                samples,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InverseOutcome { report, expansion: Some(exp), families })
}
