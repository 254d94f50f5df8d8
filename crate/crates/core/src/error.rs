use thiserror::Error;

use crate::model::ValidationReport;

/// Errors raised by the spectral routines.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid input: {0}")]
    Invalid(ValidationReport),

    #[error("zero pivot in Sturm sequence at x = {x}")]
    BreakdownAtPivot { x: f64 },

    #[error("eigenvalue brackets {index} and {} collapsed at {value}", index + 1)]
    NonSimpleSpectrum { index: usize, value: f64 },

    #[error("empty index range [{lo}, {hi}]")]
    EmptyRange { lo: usize, hi: usize },

    #[error("site {site} out of range for a {size}x{size} matrix")]
    SiteOutOfRange { site: usize, size: usize },

    #[error("thetaSq = {0} is outside (0, 1)")]
    InvalidTheta(f64),

    #[error("evaluation point {0} is a pole")]
    PoleAtPoint(f64),

    #[error("evaluation point coincides with K = {k} and N(K) = {n_at_k} differs from thetaSq = {theta_sq}")]
    PoleAtK { k: f64, n_at_k: f64, theta_sq: f64 },

    #[error("N(K) = {n_at_k} is below thetaSq = {theta_sq}")]
    AmbiguousClassification { n_at_k: f64, theta_sq: f64 },

    #[error("thetaSq is a free parameter in (0, {upper}) for this data and must be supplied")]
    MissingTheta { upper: f64 },

    #[error("residue at pole {pole} is not positive ({residue})")]
    NegativeResidue { pole: f64, residue: f64 },

    #[error("no sign change of G between poles {lo} and {hi}")]
    ZeroBracketFailure { lo: f64, hi: f64 },

    #[error("cannot choose {choose} of {available} free zeros")]
    InfeasibleCounts { choose: i64, available: usize },

    #[error("measure has coincident poles at {0}")]
    MeasureDegenerate(f64),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid mass-spring system: {0}")]
    InvalidSystem(String),

    #[error("matrix is not realizable as a chain with the given gamma0: gamma turns nonpositive at index {0}")]
    NotRealizable(usize),
}

pub type Result<T, E = SpectralError> = std::result::Result<T, E>;
