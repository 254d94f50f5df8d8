//! Direct and inverse spectral theory of Jacobi matrices under a local
//! perturbation at one site: one diagonal entry and the two adjacent
//! off-diagonal entries change, as when one mass of a spring chain is
//! replaced and a spring to the wall is attached to it.
//!
//! Everything numerical is generic over [`Real`] (`f32`, `f64`); the
//! recurrences and the continued fraction also run over exact rationals
//! through [`Field`]. The aliases below fix the scalar type.
//!
//! ```
//! use jacobi_inverse::{apply_perturbation, eigenvalues, perturbation_from, JacobiMatrix64, Tolerance64};
//!
//! let j = JacobiMatrix64::new(vec![2.0, 2.0], vec![-1.0]).unwrap();
//! let p = perturbation_from(0.5, 0.0, 0).unwrap();
//! let jt = apply_perturbation(&j, &p).unwrap();
//! let tol = Tolerance64::default();
//! assert!((eigenvalues(&j, &tol).unwrap().values()[0] - 1.0).abs() < 1e-12);
//! assert_eq!(eigenvalues(&jt, &tol).unwrap().len(), 2);
//! ```

// `!(x > y)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conditions;
pub mod eigen;
pub mod error;
pub mod fixtures;
pub mod green;
pub mod inverse;
pub mod massspring;
pub mod model;
pub mod perturb;
pub mod poly;
pub mod scalar;
pub mod tolerance;

pub use conditions::{
    check_conditions, check_interlacing, classify, ConditionResult, ConditionsReport, DataClassification,
    InterlacingReport, KCase,
};
pub use eigen::{eigenvalues, eigenvector_weights, sturm_count, sturm_count_with, WeightedSpectrum};
pub use error::{Result, SpectralError};
pub use green::{
    green_nn_poly, green_nn_spectral, green_nn_two_spectra, rational_n, rational_n_derivative, TwoSpectraRatio,
};
pub use inverse::{
    assemble_solution, build_ghat, enumerate_assignments, euclid_continued_fraction, reconstruct_weyl, solve_inverse,
    GHatExpansion, InverseOutcome, Orientation, PoleAssignment, SolutionFamily, SolveOptions,
};
pub use massspring::{jacobi_to_system, perturbation_to_physical, system_to_jacobi, MassSpringSystem};
pub use model::{
    validate_jacobi, validate_spectral_data, JacobiMatrix, PerturbationParams, PoleResidueForm, SpectralData, Spectrum,
    ValidationReport, Violation,
};
pub use perturb::{apply_perturbation, mass_ratio_from_unmovable, perturbation_from};
pub use poly::{char_poly, eval_first_kind, eval_qn, eval_second_kind, submatrix, PolySequence};
pub use scalar::{Field, Real};
pub use tolerance::TolerancePolicy;

pub type JacobiMatrix64 = JacobiMatrix<f64>;
pub type JacobiMatrix32 = JacobiMatrix<f32>;
pub type ExactJacobiMatrix = JacobiMatrix<num_rational::BigRational>;
pub type Spectrum64 = Spectrum<f64>;
pub type SpectralData64 = SpectralData<f64>;
pub type PerturbationParams64 = PerturbationParams<f64>;
pub type Tolerance64 = TolerancePolicy<f64>;
pub type Tolerance32 = TolerancePolicy<f32>;
pub type MassSpringSystem64 = MassSpringSystem<f64>;
pub type ConditionsReport64 = ConditionsReport<f64>;
pub type InverseOutcome64 = InverseOutcome<f64>;
