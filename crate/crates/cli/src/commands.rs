use std::path::{Path, PathBuf};

use jacobi_inverse::inverse::family_coordinates;
use jacobi_inverse::{
    apply_perturbation, check_conditions, eigenvalues, green_nn_poly, green_nn_spectral, green_nn_two_spectra,
    jacobi_to_system, perturbation_from, solve_inverse, system_to_jacobi, DataClassification, InverseOutcome64,
    JacobiMatrix64, MassSpringSystem64, SolveOptions, SpectralData64, SpectralError, Spectrum, Tolerance64,
};
use serde::Serialize;

use crate::io::{emit, from_value, read_json, read_value};
use crate::Failure;

/// Input errors exit with 2, everything else with 1. Messages lead with the
/// error kind.
fn classify_error(e: SpectralError) -> Failure {
    let debug = format!("{e:?}");
    let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default();
    let msg = format!("{kind}: {e}");
    match e {
        SpectralError::Invalid(_)
        | SpectralError::InvalidTheta(_)
        | SpectralError::SiteOutOfRange { .. }
        | SpectralError::EmptyRange { .. }
        | SpectralError::MissingTheta { .. }
        | SpectralError::InvalidSystem(_) => Failure::Input(msg),
        _ => Failure::Semantic(msg),
    }
}

#[derive(Serialize)]
struct ForwardOutput {
    #[serde(rename = "J")]
    j: JacobiMatrix64,
    #[serde(rename = "J_tilde")]
    j_tilde: JacobiMatrix64,
    sigma: Spectrum<f64>,
    sigma_hat: Spectrum<f64>,
    #[serde(rename = "K")]
    k: f64,
    n: usize,
    theta_sq: f64,
    #[serde(rename = "M")]
    m: f64,
    classification: Option<DataClassification<f64>>,
}

pub fn forward(
    matrix: &Path,
    site: usize,
    theta_sq: f64,
    k: f64,
    tol: &Tolerance64,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let j: JacobiMatrix64 = read_json(matrix, "matrix")?;
    j.check_site(site).map_err(classify_error)?;
    let params = perturbation_from(theta_sq, k, site).map_err(classify_error)?;
    let j_tilde = apply_perturbation(&j, &params).map_err(classify_error)?;
    let sigma = eigenvalues(&j, tol).map_err(classify_error)?;
    let sigma_hat = eigenvalues(&j_tilde, tol).map_err(classify_error)?;
    let data = SpectralData64 { sigma: sigma.clone(), sigma_hat: sigma_hat.clone(), k, site, theta_sq: Some(theta_sq) };
    let classification = check_conditions(&data, tol).classification;
    let output = ForwardOutput { j, j_tilde, sigma, sigma_hat, k, n: site, theta_sq, m: params.m, classification };
    emit(&output, out)?;
    Ok(0)
}

pub fn check(data: &Path, tol: &Tolerance64, out: Option<&Path>) -> Result<i32, Failure> {
    let d: SpectralData64 = read_json(data, "data")?;
    let report = check_conditions(&d, tol);
    if report.first_failed.as_deref() == Some("input") {
        eprintln!("invalid input: {}", report.validation);
        emit(&report, out)?;
        return Ok(2);
    }
    emit(&report, out)?;
    if !report.pass {
        let failed = report.first_failed.clone().unwrap_or_default();
        let detail = match failed.as_str() {
            "I" => &report.conditions.interlacing.detail,
            "II" => &report.conditions.unmovable.detail,
            "III" => &report.conditions.k_outside.detail,
            _ => &report.conditions.k_common.detail,
        };
        eprintln!("condition {failed} failed: {detail}");
        return Ok(1);
    }
    Ok(0)
}

/// Where the matrix supplied alongside the data sits among the families.
#[derive(Serialize)]
struct Located {
    family: Option<usize>,
    t: Vec<f64>,
    max_abs_diff: Option<f64>,
    detail: Option<String>,
}

#[derive(Serialize)]
struct InvertOutput {
    #[serde(flatten)]
    outcome: InverseOutcome64,
    #[serde(skip_serializing_if = "Option::is_none")]
    located: Option<Located>,
}

fn locate(j: &JacobiMatrix64, outcome: &InverseOutcome64, d: &SpectralData64, tol: &Tolerance64) -> Located {
    let exp = match &outcome.expansion {
        Some(e) => e,
        None => {
            return Located { family: None, t: Vec::new(), max_abs_diff: None, detail: Some("no expansion".into()) }
        }
    };
    let result = family_coordinates(j, exp, tol).and_then(|(asg, t)| {
        let index =
            outcome.families.iter().position(|f| f.indices == asg).ok_or_else(|| {
                SpectralError::VerificationFailed("assignment of the matrix is not enumerated".into())
            })?;
        let sample = outcome.families[index].sample(exp, &t, d, &outcome.report, tol)?;
        Ok((index, t, sample.j.max_abs_diff(j)))
    });
    match result {
        Ok((index, t, diff)) => Located { family: Some(index), t, max_abs_diff: Some(diff), detail: None },
        Err(e) => Located { family: None, t: Vec::new(), max_abs_diff: None, detail: Some(e.to_string()) },
    }
}

pub fn invert(data: &Path, options: &SolveOptions, tol: &Tolerance64, out: Option<&Path>) -> Result<i32, Failure> {
    let mut value = read_value(data)?;
    let target = match value.as_object_mut().and_then(|o| o.remove("J")) {
        Some(v) => Some(from_value::<JacobiMatrix64>(v, "data: J")?),
        None => None,
    };
    let d: SpectralData64 = from_value(value, "data")?;
    let outcome = solve_inverse(&d, options, tol).map_err(classify_error)?;
    if outcome.report.first_failed.as_deref() == Some("input") {
        eprintln!("invalid input: {}", outcome.report.validation);
        emit(&InvertOutput { outcome, located: None }, out)?;
        return Ok(2);
    }
    let pass = outcome.report.pass;
    let failed = outcome.report.first_failed.clone();
    let located = target.filter(|_| pass).map(|j| locate(&j, &outcome, &d, tol));
    emit(&InvertOutput { outcome, located }, out)?;
    if !pass {
        eprintln!("condition {} failed; no families", failed.unwrap_or_default());
        return Ok(1);
    }
    Ok(0)
}

pub enum ConvertMode {
    ToJacobi(PathBuf),
    ToSystem(PathBuf, f64),
}

pub fn convert(mode: &ConvertMode, tol: &Tolerance64, out: Option<&Path>) -> Result<i32, Failure> {
    match mode {
        ConvertMode::ToJacobi(path) => {
            let sys: MassSpringSystem64 = read_json(path, "system")?;
            let j = system_to_jacobi(&sys).map_err(classify_error)?;
            emit(&j, out)?;
        }
        ConvertMode::ToSystem(path, gamma0) => {
            let j: JacobiMatrix64 = read_json(path, "matrix")?;
            let sys = jacobi_to_system(&j, *gamma0, tol).map_err(classify_error)?;
            emit(&sys, out)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct GreenPoint {
    lambda: f64,
    poly: Option<f64>,
    spectral: Option<f64>,
    two_spectra: Option<f64>,
    deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct GreenOutput {
    n: usize,
    points: Vec<GreenPoint>,
    max_deviation: f64,
    agree: bool,
}

/// Largest pairwise difference relative to the largest magnitude.
fn relative_spread(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    (hi - lo) / scale
}

#[allow(clippy::too_many_arguments)]
pub fn green(
    matrix: &Path,
    site: usize,
    theta_sq: f64,
    k: f64,
    lambdas: &[f64],
    tol: &Tolerance64,
    out: Option<&Path>,
) -> Result<i32, Failure> {
    let j: JacobiMatrix64 = read_json(matrix, "matrix")?;
    j.check_site(site).map_err(classify_error)?;
    let params = perturbation_from(theta_sq, k, site).map_err(classify_error)?;
    let j_tilde = apply_perturbation(&j, &params).map_err(classify_error)?;
    let sigma = eigenvalues(&j, tol).map_err(classify_error)?;
    let sigma_hat = eigenvalues(&j_tilde, tol).map_err(classify_error)?;

    let mut points = Vec::with_capacity(lambdas.len());
    let mut agree = true;
    let mut max_deviation = 0.0f64;
    for &x in lambdas {
        let routes = [
            green_nn_poly(&j, site, x),
            green_nn_spectral(&j, site, x, tol),
            green_nn_two_spectra(&sigma, &sigma_hat, theta_sq, k, x, tol),
        ];
        let error = routes.iter().find_map(|r| r.as_ref().err()).map(ToString::to_string);
        let values: Vec<Option<f64>> = routes.iter().map(|r| r.as_ref().ok().copied()).collect();
        let deviation = match error {
            None => Some(relative_spread(&values.iter().flatten().copied().collect::<Vec<_>>())),
            Some(_) => None,
        };
        match deviation {
            Some(dev) => {
                max_deviation = max_deviation.max(dev);
                agree &= dev <= tol.rel_tol;
            }
            None => agree = false,
        }
        points.push(GreenPoint {
            lambda: x,
            poly: values[0],
            spectral: values[1],
            two_spectra: values[2],
            deviation,
            error,
        });
    }
    emit(&GreenOutput { n: site, points, max_deviation, agree }, out)?;
    Ok(if agree { 0 } else { 1 })
}
