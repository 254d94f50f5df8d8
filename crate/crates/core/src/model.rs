//! Domain types shared by every module and their validation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

/// Real symmetric tridiagonal matrix with strictly negative off-diagonal.
///
/// `a` is the diagonal `a_0..a_{N-1}`, `b` the off-diagonal `b_0..b_{N-2}`.
/// Serialized as `{"n": N, "a": [...], "b": [...]}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "JacobiRepr<T>", bound(deserialize = "T: Deserialize<'de>"))]
pub struct JacobiMatrix<T> {
    a: Vec<T>,
    b: Vec<T>,
}

#[derive(Deserialize)]
struct JacobiRepr<T> {
    n: usize,
    a: Vec<T>,
    b: Vec<T>,
}

#[derive(Serialize)]
struct JacobiReprRef<'a, T> {
    n: usize,
    a: &'a [T],
    b: &'a [T],
}

impl<T: Serialize> Serialize for JacobiMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JacobiReprRef { n: self.a.len(), a: &self.a, b: &self.b }.serialize(s)
    }
}

impl<T> TryFrom<JacobiRepr<T>> for JacobiMatrix<T> {
    type Error = String;

    fn try_from(r: JacobiRepr<T>) -> std::result::Result<Self, String> {
        if r.n != r.a.len() {
            return Err(format!("field `n` = {} does not match the length of field `a` ({})", r.n, r.a.len()));
        }
        Ok(JacobiMatrix { a: r.a, b: r.b })
    }
}

impl<T> JacobiMatrix<T> {
    /// Wraps the entries without checking any invariant. Use
    /// [`validate_jacobi`] before handing the result to numerical routines.
    pub fn new_unchecked(a: Vec<T>, b: Vec<T>) -> Self {
        Self { a, b }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    #[inline]
    pub fn diag(&self) -> &[T] {
        &self.a
    }

    #[inline]
    pub fn offdiag(&self) -> &[T] {
        &self.b
    }

    pub fn into_parts(self) -> (Vec<T>, Vec<T>) {
        (self.a, self.b)
    }

    /// Same matrix with the index order reversed.
    pub fn reversed(&self) -> Self
    where
        T: Clone,
    {
        Self { a: self.a.iter().rev().cloned().collect(), b: self.b.iter().rev().cloned().collect() }
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site < self.dim() {
            Ok(())
        } else {
            Err(SpectralError::SiteOutOfRange { site, size: self.dim() })
        }
    }
}

impl<T: Real> JacobiMatrix<T> {
    /// Validated constructor.
    pub fn new(a: Vec<T>, b: Vec<T>) -> Result<Self> {
        let j = Self { a, b };
        let report = validate_jacobi(&j);
        if report.is_valid() {
            Ok(j)
        } else {
            Err(SpectralError::Invalid(report))
        }
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.dim();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let left = if i > 0 { self.b[i - 1].abs() } else { T::zero() };
            let right = if i + 1 < n { self.b[i].abs() } else { T::zero() };
            lo = lo.min(self.a[i] - left - right);
            hi = hi.max(self.a[i] + left + right);
        }
        (lo, hi)
    }

    /// Largest absolute entry difference against another matrix of equal size.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.a
            .iter()
            .zip(&other.a)
            .chain(self.b.iter().zip(&other.b))
            .fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
    }
}

/// Parameters of the interior perturbation at `site`.
///
/// `theta_sq` is the mass ratio `m_n / m~_n`, `k` the ratio of the added
/// stiffness to the added mass and `m` the added stiffness over the original
/// mass. They satisfy `m = (1/theta_sq - 1) * k`; use
/// [`crate::perturb::perturbation_from`] to build consistent values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationParams<T> {
    pub site: usize,
    pub theta_sq: T,
    #[serde(rename = "K")]
    pub k: T,
    #[serde(rename = "M")]
    pub m: T,
}

impl<T: Real> PerturbationParams<T> {
    pub fn theta(&self) -> T {
        self.theta_sq.sqrt()
    }
}

/// Strictly increasing finite point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum<T>(Vec<T>);

impl<T> Spectrum<T> {
    pub fn new_unchecked(values: Vec<T>) -> Self {
        Self(values)
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

impl<T: Real> Spectrum<T> {
    /// Requires finite, strictly increasing values.
    pub fn new(values: Vec<T>) -> Result<Self> {
        let mut report = ValidationReport::default();
        check_spectrum("sigma", &values, T::zero(), &mut report);
        if report.is_valid() {
            Ok(Self(values))
        } else {
            Err(SpectralError::Invalid(report))
        }
    }

    pub fn max_abs(&self) -> T {
        TolerancePolicy::spread(self.0.iter().copied())
    }

    /// Largest pointwise distance to another spectrum of equal size.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.len() != other.len() {
            return T::infinity();
        }
        self.0.iter().zip(&other.0).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
    }
}

/// Input of the inverse problem.
///
/// Serialized as `{"sigma": [...], "sigma_hat": [...], "K": x, "n": i,
/// "theta_sq": x | null}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData<T> {
    pub sigma: Spectrum<T>,
    pub sigma_hat: Spectrum<T>,
    #[serde(rename = "K")]
    pub k: T,
    #[serde(rename = "n")]
    pub site: usize,
    #[serde(default)]
    pub theta_sq: Option<T>,
}

impl<T: Real> SpectralData<T> {
    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    /// `max(1, max |x|)` over both spectra and `K`.
    pub fn spread(&self) -> T {
        TolerancePolicy::spread(
            self.sigma.values().iter().chain(self.sigma_hat.values()).copied().chain(std::iter::once(self.k)),
        )
    }
}

/// `value(x) = sum_i residue_i / (pole_i - x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleResidueForm<T> {
    poles: Vec<T>,
    residues: Vec<T>,
}

impl<T: Real> PoleResidueForm<T> {
    /// Poles strictly increasing, residues strictly positive.
    pub fn new(poles: Vec<T>, residues: Vec<T>) -> Result<Self> {
        let mut report = ValidationReport::default();
        if poles.len() != residues.len() {
            report.push(Violation::LengthMismatch { what: "residues", expected: poles.len(), got: residues.len() });
        }
        check_spectrum("poles", &poles, T::zero(), &mut report);
        for (i, r) in residues.iter().enumerate() {
            if !(r.is_finite() && *r > T::zero()) {
                report.push(Violation::NonPositive { what: "residues", index: i, value: r.as_f64() });
            }
        }
        if report.is_valid() {
            Ok(Self { poles, residues })
        } else {
            Err(SpectralError::Invalid(report))
        }
    }

    pub fn poles(&self) -> &[T] {
        &self.poles
    }

    pub fn residues(&self) -> &[T] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.residues.iter().fold(T::zero(), |s, r| s + *r)
    }

    pub fn eval(&self, x: T) -> T {
        self.poles.iter().zip(&self.residues).fold(T::zero(), |s, (p, r)| s + *r / (*p - x))
    }

    pub fn derivative(&self, x: T) -> T {
        self.poles.iter().zip(&self.residues).fold(T::zero(), |s, (p, r)| {
            let d = *p - x;
            s + *r / (d * d)
        })
    }
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Empty { what: &'static str },
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    OffdiagNotNegative { index: usize, value: f64 },
    NonFinite { what: &'static str, index: usize },
    NotIncreasing { what: &'static str, index: usize },
    NonPositive { what: &'static str, index: usize, value: f64 },
    SizeMismatch { sigma: usize, sigma_hat: usize },
    SiteOutOfRange { site: usize, size: usize },
    ThetaOutOfRange { value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty { what } => write!(f, "{what} must not be empty"),
            Violation::LengthMismatch { what: "b", expected, got } => {
                write!(f, "length(b) ≠ N−1 (expected {expected}, got {got})")
            }
            Violation::LengthMismatch { what, expected, got } => {
                write!(f, "length of {what} is {got}, expected {expected}")
            }
            Violation::OffdiagNotNegative { index, value } => {
                write!(f, "offdiag must be negative (b[{index}] = {value})")
            }
            Violation::NonFinite { what, index } => write!(f, "{what}[{index}] is not finite"),
            Violation::NotIncreasing { what, index } => {
                write!(f, "spectrum not strictly increasing at tolerance ({what}[{index}] vs {what}[{}])", index + 1)
            }
            Violation::NonPositive { what, index, value } => {
                write!(f, "{what}[{index}] = {value} must be positive")
            }
            Violation::SizeMismatch { sigma, sigma_hat } => {
                write!(f, "sigma has {sigma} points but sigma_hat has {sigma_hat}")
            }
            Violation::SiteOutOfRange { site, size } => {
                write!(f, "site n = {site} outside [0, {}]", size.saturating_sub(1))
            }
            Violation::ThetaOutOfRange { value } => write!(f, "thetaSq out of (0,1): {value}"),
        }
    }
}

/// List of violated invariants; empty iff the input is valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_jacobi<T: Real>(j: &JacobiMatrix<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = j.dim();
    if n == 0 {
        report.push(Violation::Empty { what: "a" });
    }
    if j.b.len() != n.saturating_sub(1) {
        report.push(Violation::LengthMismatch { what: "b", expected: n.saturating_sub(1), got: j.b.len() });
    }
    for (i, x) in j.a.iter().enumerate() {
        if !x.is_finite() {
            report.push(Violation::NonFinite { what: "a", index: i });
        }
    }
    for (i, x) in j.b.iter().enumerate() {
        if !x.is_finite() {
            report.push(Violation::NonFinite { what: "b", index: i });
        } else if *x >= T::zero() {
            report.push(Violation::OffdiagNotNegative { index: i, value: x.as_f64() });
        }
    }
    report
}

/// Checks strict monotonicity, with consecutive points closer than `gap`
/// counted as ties.
fn check_spectrum<T: Real>(what: &'static str, xs: &[T], gap: T, report: &mut ValidationReport) {
    for (i, x) in xs.iter().enumerate() {
        if !x.is_finite() {
            report.push(Violation::NonFinite { what, index: i });
        }
    }
    for (i, w) in xs.windows(2).enumerate() {
        if !(w[1] - w[0] > gap) {
            report.push(Violation::NotIncreasing { what, index: i });
        }
    }
}

pub fn validate_spectral_data<T: Real>(d: &SpectralData<T>, tol: &TolerancePolicy<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let gap = tol.coincidence(d.spread());
    let (n, nh) = (d.sigma.len(), d.sigma_hat.len());
    if n == 0 {
        report.push(Violation::Empty { what: "sigma" });
    }
    if n != nh {
        report.push(Violation::SizeMismatch { sigma: n, sigma_hat: nh });
    }
    check_spectrum("sigma", d.sigma.values(), gap, &mut report);
    check_spectrum("sigma_hat", d.sigma_hat.values(), gap, &mut report);
    if !d.k.is_finite() {
        report.push(Violation::NonFinite { what: "K", index: 0 });
    }
    if d.site >= n.max(1) {
        report.push(Violation::SiteOutOfRange { site: d.site, size: n });
    }
    if let Some(t) = d.theta_sq {
        if !(t > T::zero() && t < T::one()) {
            report.push(Violation::ThetaOutOfRange { value: t.as_f64() });
        }
    }
    report
}
