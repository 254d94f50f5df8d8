//! Classification of two-spectra data and the necessary and sufficient
//! conditions for it to come from a perturbed pair `(J, J~)`.
//!
//! The conditions are checked in a fixed order and reported under these
//! labels:
//!
//! * `I`: `sigma`, `sigma_hat` and `K` interlace.
//! * `II`: `N(mu_1) = ... = N(mu_q) = theta^2` lies in `(0, 1)`, where the
//!   `mu` are the common points other than `K`.
//! * `III`: if `K` is in neither spectrum, `q <= min(n, N-n-1)` and
//!   `N(K) = theta^2`.
//! * `IV`: if `K` is in either spectrum it is in both (`IV`), and either
//!   `q <= min(n, N-n-1)` with `N(K) > theta^2` (`IV.a`) or
//!   `q < min(n, N-n-1)` with `N(K) = theta^2` and `N'(K) = 0` (`IV.b`).

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::green::TwoSpectraRatio;
use crate::model::{validate_spectral_data, SpectralData, ValidationReport, Violation};
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KCase {
    /// `K` lies in neither spectrum.
    KOutside,
    /// `K` is a common point and a pole of `G` (`N(K) > theta^2`).
    KCommonPole,
    /// `K` is a common point and a zero of `G` (`N(K) = theta^2`, `N'(K) = 0`).
    KCommonZero,
    /// `K` lies in exactly one of the spectra; never realizable.
    KUnpaired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataClassification<T> {
    /// Number of points of `sigma` strictly below `K`.
    pub p: usize,
    /// Common points other than `K`, increasing.
    pub mu: Vec<T>,
    pub q: usize,
    pub k_case: KCase,
    pub theta_sq: T,
    /// `Some((0, N(K)))` when `theta_sq` is a free parameter of the data.
    pub theta_sq_range: Option<(T, T)>,
    pub n_tilde: usize,
    /// Index of `K` in `sigma` when it is a common point.
    pub k_index: Option<usize>,
    pub n_at_k: Option<T>,
    pub dn_at_k: Option<T>,
}

/// One interval of the interlacing pattern and how many points of
/// `sigma_hat` fall in it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalCount<T> {
    pub lo: T,
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub count: usize,
}

impl<T: Real> IntervalCount<T> {
    fn contains(&self, x: T, tol: &TolerancePolicy<T>, spread: T) -> bool {
        let at_lo = tol.close(x, self.lo, spread);
        let at_hi = tol.close(x, self.hi, spread);
        let above = if at_lo { self.lo_closed } else { x > self.lo };
        let below = if at_hi { self.hi_closed } else { x < self.hi };
        above && below
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlacingReport<T> {
    pub pass: bool,
    pub p: usize,
    pub intervals: Vec<IntervalCount<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub label: String,
    pub applicable: bool,
    pub pass: bool,
    pub detail: String,
}

impl ConditionResult {
    fn ok(label: &str, detail: impl Into<String>) -> Self {
        Self { label: label.into(), applicable: true, pass: true, detail: detail.into() }
    }

    fn fail(label: &str, detail: impl Into<String>) -> Self {
        Self { label: label.into(), applicable: true, pass: false, detail: detail.into() }
    }

    fn not_applicable(label: &str, detail: impl Into<String>) -> Self {
        Self { label: label.into(), applicable: false, pass: true, detail: detail.into() }
    }

    fn skipped(label: &str) -> Self {
        Self { label: label.into(), applicable: false, pass: false, detail: "not evaluated".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    #[serde(rename = "I")]
    pub interlacing: ConditionResult,
    #[serde(rename = "II")]
    pub unmovable: ConditionResult,
    #[serde(rename = "III")]
    pub k_outside: ConditionResult,
    #[serde(rename = "IV")]
    pub k_common: ConditionResult,
}

impl Conditions {
    fn in_order(&self) -> [&ConditionResult; 4] {
        [&self.interlacing, &self.unmovable, &self.k_outside, &self.k_common]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionsReport<T> {
    pub pass: bool,
    /// Label of the first failed condition; `"input"` for malformed data.
    pub first_failed: Option<String>,
    pub conditions: Conditions,
    pub classification: Option<DataClassification<T>>,
    pub interlacing: Option<InterlacingReport<T>>,
    pub validation: ValidationReport,
}

/// Everything derivable from the data without deciding pass or fail.
struct Analysis<T> {
    spread: T,
    ratio: TwoSpectraRatio<T>,
    p: usize,
    mu: Vec<T>,
    k_in_sigma: Option<usize>,
    k_in_hat: bool,
    n_tilde: usize,
    n_at_k: Option<T>,
    n_at_k_tol: Option<T>,
    dn_at_k: Option<T>,
    dn_zero: bool,
    theta_sq: Option<T>,
    theta_free: bool,
}

fn analyse<T: Real>(d: &SpectralData<T>, tol: &TolerancePolicy<T>) -> Analysis<T> {
    let spread = d.spread();
    let sigma = d.sigma.values();
    let hat = d.sigma_hat.values();
    let k = d.k;
    let ratio = TwoSpectraRatio::new(&d.sigma, &d.sigma_hat, spread, tol);
    let near_k = |x: &T| tol.close(*x, k, spread);

    let p = sigma.iter().filter(|x| **x < k && !near_k(x)).count();
    let k_in_sigma = sigma.iter().position(near_k);
    let k_in_hat = hat.iter().any(near_k);
    let mu: Vec<T> =
        sigma.iter().filter(|x| !near_k(x) && hat.iter().any(|y| tol.close(**x, *y, spread))).copied().collect();
    let n = d.dim();
    let n_tilde = d.site.min(n.saturating_sub(d.site + 1));

    let n_at_k = ratio.value(k).ok();
    let n_at_k_tol = ratio.value_tolerance(k).ok();
    let dn_at_k = ratio.derivative(k).ok();
    let dn_zero = match (dn_at_k, ratio.derivative_tolerance(k).ok()) {
        (Some(v), Some(t)) => v.abs() <= t,
        _ => false,
    };

    let k_common = k_in_sigma.is_some() && k_in_hat;
    let outside = k_in_sigma.is_none() && !k_in_hat;
    let mut theta_free = false;
    let theta_sq = if let Some(m1) = mu.first() {
        ratio.value(*m1).ok()
    } else if let Some(t) = d.theta_sq {
        if k_common && !dn_zero {
            theta_free = true;
        }
        Some(t)
    } else if outside || (k_common && dn_zero) {
        n_at_k
    } else {
        theta_free = k_common;
        None
    };

    Analysis {
        spread,
        ratio,
        p,
        mu,
        k_in_sigma,
        k_in_hat,
        n_tilde,
        n_at_k,
        n_at_k_tol,
        dn_at_k,
        dn_zero,
        theta_sq,
        theta_free,
    }
}

fn interlacing_of<T: Real>(d: &SpectralData<T>, tol: &TolerancePolicy<T>, spread: T, p: usize) -> InterlacingReport<T> {
    let s = d.sigma.values();
    let k = d.k;
    let n = s.len();
    let mut intervals = Vec::with_capacity(n + 1);
    let mut push = |lo: T, hi: T, lo_closed: bool, hi_closed: bool| {
        intervals.push(IntervalCount { lo, hi, lo_closed, hi_closed, count: 0 })
    };
    // s is 0-based: lambda_j = s[j - 1].
    for j in 1..p {
        push(s[j - 1], s[j], true, false);
    }
    if p >= 1 {
        push(s[p - 1], k, true, false);
    }
    if p < n && !tol.close(k, s[p], spread) {
        push(k, s[p], false, true);
    }
    for j in p + 1..n {
        push(s[j - 1], s[j], false, true);
    }
    for iv in intervals.iter_mut() {
        iv.count = d.sigma_hat.values().iter().filter(|x| iv.contains(**x, tol, spread)).count();
    }
    let pass = intervals.iter().all(|iv| iv.count == 1);
    InterlacingReport { pass, p, intervals }
}

/// Interlacing of `sigma_hat` around `sigma` and `K`.
pub fn check_interlacing<T: Real>(d: &SpectralData<T>, tol: &TolerancePolicy<T>) -> InterlacingReport<T> {
    let spread = d.spread();
    let k = d.k;
    let p = d.sigma.values().iter().filter(|x| **x < k && !tol.close(**x, k, spread)).count();
    interlacing_of(d, tol, spread, p)
}

fn k_case_of<T: Real>(a: &Analysis<T>) -> KCase {
    if a.k_in_sigma.is_none() && !a.k_in_hat {
        return KCase::KOutside;
    }
    if a.k_in_sigma.is_none() || !a.k_in_hat {
        return KCase::KUnpaired;
    }
    match (a.n_at_k, a.n_at_k_tol, a.theta_sq) {
        (Some(nk), Some(t), Some(th)) if (nk - th).abs() <= t => KCase::KCommonZero,
        _ => KCase::KCommonPole,
    }
}

fn classification_of<T: Real>(a: &Analysis<T>, theta_sq: T) -> DataClassification<T> {
    let k_case = k_case_of(a);
    let theta_sq_range = if a.theta_free { a.n_at_k.map(|nk| (T::zero(), nk)) } else { None };
    DataClassification {
        p: a.p,
        mu: a.mu.clone(),
        q: a.mu.len(),
        k_case,
        theta_sq,
        theta_sq_range,
        n_tilde: a.n_tilde,
        k_index: if a.k_in_hat { a.k_in_sigma } else { None },
        n_at_k: a.n_at_k,
        dn_at_k: a.dn_at_k,
    }
}

fn structural_violations(report: &ValidationReport) -> bool {
    report.violations.iter().any(|v| !matches!(v, Violation::NotIncreasing { .. }))
}

/// Classifies validated data.
///
/// `theta_sq` is taken from the first unmovable point when there is one,
/// otherwise from the data, otherwise from `N(K)` when `K` lies outside both
/// spectra or is a common zero of `G`.
pub fn classify<T: Real>(d: &SpectralData<T>, tol: &TolerancePolicy<T>) -> Result<DataClassification<T>> {
    let report = validate_spectral_data(d, tol);
    if !report.is_valid() {
        return Err(SpectralError::Invalid(report));
    }
    let a = analyse(d, tol);
    let theta_sq = match a.theta_sq {
        Some(t) => t,
        None => return Err(SpectralError::MissingTheta { upper: a.n_at_k.map(|v| v.as_f64()).unwrap_or(f64::NAN) }),
    };
    let cls = classification_of(&a, theta_sq);
    if cls.k_case == KCase::KCommonPole {
        if let Some(nk) = a.n_at_k {
            if nk < theta_sq {
                return Err(SpectralError::AmbiguousClassification {
                    n_at_k: nk.as_f64(),
                    theta_sq: theta_sq.as_f64(),
                });
            }
        }
    }
    Ok(cls)
}

/// Evaluates conditions I to IV.
pub fn check_conditions<T: Real>(d: &SpectralData<T>, tol: &TolerancePolicy<T>) -> ConditionsReport<T> {
    let validation = validate_spectral_data(d, tol);
    if structural_violations(&validation) {
        return ConditionsReport {
            pass: false,
            first_failed: Some("input".into()),
            conditions: Conditions {
                interlacing: ConditionResult::skipped("I"),
                unmovable: ConditionResult::skipped("II"),
                k_outside: ConditionResult::skipped("III"),
                k_common: ConditionResult::skipped("IV"),
            },
            classification: None,
            interlacing: None,
            validation,
        };
    }
    if !validation.is_valid() {
        let c = Conditions {
            interlacing: ConditionResult::fail("I", format!("spectra are not strictly increasing: {validation}")),
            unmovable: ConditionResult::skipped("II"),
            k_outside: ConditionResult::skipped("III"),
            k_common: ConditionResult::skipped("IV"),
        };
        return ConditionsReport {
            pass: false,
            first_failed: Some("I".into()),
            conditions: c,
            classification: None,
            interlacing: None,
            validation,
        };
    }

    let a = analyse(d, tol);
    let inter = interlacing_of(d, tol, a.spread, a.p);
    let q = a.mu.len();
    let one = T::one();

    let c_i = if inter.pass {
        ConditionResult::ok("I", "every interval holds exactly one point of sigma_hat")
    } else {
        let bad: Vec<String> = inter
            .intervals
            .iter()
            .filter(|iv| iv.count != 1)
            .map(|iv| {
                format!(
                    "{}{}, {}{} holds {}",
                    if iv.lo_closed { "[" } else { "(" },
                    iv.lo,
                    iv.hi,
                    if iv.hi_closed { "]" } else { ")" },
                    iv.count
                )
            })
            .collect();
        ConditionResult::fail("I", format!("interlacing violated: {}", bad.join("; ")))
    };

    let c_ii = match a.theta_sq {
        None if a.theta_free => match a.n_at_k {
            Some(nk) if nk > T::zero() => {
                ConditionResult::ok("II", format!("no unmovable points; thetaSq is free in (0, {nk})"))
            }
            _ => ConditionResult::fail("II", "no admissible thetaSq"),
        },
        None => ConditionResult::fail("II", "thetaSq cannot be determined from the data"),
        Some(th) => {
            let mut bad = Vec::new();
            for m in &a.mu {
                let v = a.ratio.value(*m);
                let t = a.ratio.value_tolerance(*m);
                match (v, t) {
                    (Ok(v), Ok(t)) if (v - th).abs() <= t => {}
                    (Ok(v), _) => bad.push(format!("N({m}) = {v} differs from {th}")),
                    (Err(_), _) => bad.push(format!("N has a pole at {m}")),
                }
            }
            if let (Some(given), Some(m1)) = (d.theta_sq, a.mu.first()) {
                let t = a.ratio.value_tolerance(*m1).unwrap_or(tol.rel_tol);
                if (given - th).abs() > t {
                    bad.push(format!("supplied thetaSq {given} differs from N(mu_1) = {th}"));
                }
            }
            if !(th > T::zero() && th < one) {
                bad.push(format!("thetaSq = {th} is outside (0,1)"));
            }
            if bad.is_empty() {
                ConditionResult::ok("II", format!("thetaSq = {th}, q = {q}"))
            } else {
                ConditionResult::fail("II", bad.join("; "))
            }
        }
    };

    let outside = a.k_in_sigma.is_none() && !a.k_in_hat;
    let c_iii = if !outside {
        ConditionResult::not_applicable("III", "K lies in sigma or sigma_hat")
    } else {
        let mut bad = Vec::new();
        if q > a.n_tilde {
            bad.push(format!("q = {q} exceeds min(n, N-n-1) = {}", a.n_tilde));
        }
        match (a.n_at_k, a.n_at_k_tol, a.theta_sq) {
            (Some(nk), Some(t), Some(th)) if (nk - th).abs() > t => {
                bad.push(format!("N(K) = {nk} differs from thetaSq = {th}"))
            }
            (Some(_), Some(_), Some(_)) => {}
            _ => bad.push("N(K) or thetaSq undefined".into()),
        }
        if bad.is_empty() {
            ConditionResult::ok("III", "q <= min(n, N-n-1) and N(K) = thetaSq")
        } else {
            ConditionResult::fail("III", bad.join("; "))
        }
    };

    let c_iv = if outside {
        ConditionResult::not_applicable("IV", "K lies in neither spectrum")
    } else if a.k_in_sigma.is_none() || !a.k_in_hat {
        ConditionResult::fail("IV", "K lies in exactly one of sigma, sigma_hat")
    } else {
        match (a.n_at_k, a.n_at_k_tol) {
            (Some(nk), Some(t)) => {
                let th = a.theta_sq;
                let zero_branch = th.map(|th| (nk - th).abs() <= t).unwrap_or(false);
                if zero_branch {
                    let mut bad = Vec::new();
                    if q >= a.n_tilde {
                        bad.push(format!("q = {q} must be below min(n, N-n-1) = {}", a.n_tilde));
                    }
                    if !a.dn_zero {
                        bad.push(format!("N'(K) = {} is not zero", a.dn_at_k.unwrap_or(T::nan())));
                    }
                    if bad.is_empty() {
                        ConditionResult::ok("IV.b", "N(K) = thetaSq and N'(K) = 0")
                    } else {
                        ConditionResult::fail("IV.b", format!("IV.b violated: {}", bad.join("; ")))
                    }
                } else {
                    let mut bad = Vec::new();
                    if q > a.n_tilde {
                        bad.push(format!("q = {q} exceeds min(n, N-n-1) = {}", a.n_tilde));
                    }
                    if let Some(th) = th {
                        if !(nk > th) {
                            bad.push(format!("N(K) = {nk} is not above thetaSq = {th}"));
                        }
                    } else if !(nk > T::zero()) {
                        bad.push(format!("N(K) = {nk} leaves no admissible thetaSq"));
                    }
                    if bad.is_empty() {
                        ConditionResult::ok("IV.a", "N(K) > thetaSq")
                    } else {
                        ConditionResult::fail("IV.a", format!("IV.a violated: {}", bad.join("; ")))
                    }
                }
            }
            _ => ConditionResult::fail("IV", "N(K) is undefined"),
        }
    };

    let conditions = Conditions { interlacing: c_i, unmovable: c_ii, k_outside: c_iii, k_common: c_iv };
    let first_failed = conditions.in_order().iter().find(|c| !c.pass).map(|c| c.label.clone());
    let classification = a.theta_sq.map(|th| classification_of(&a, th));
    ConditionsReport {
        pass: first_failed.is_none(),
        first_failed,
        conditions,
        classification,
        interlacing: Some(inter),
        validation,
    }
}
