use serde::{Deserialize, Serialize};

use crate::conditions::{DataClassification, KCase};
use crate::error::{Result, SpectralError};
use crate::green::TwoSpectraRatio;
use crate::model::{PoleResidueForm, SpectralData};
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

/// `G(x, n, n)` rebuilt from two spectra, in pole-residue form, together with
/// the expansion `-1/G = x - a + sum beta_l / (nu_l - x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GHatExpansion<T> {
    /// Poles `l_i` and residues `alpha_i > 0` with `sum alpha = 1`.
    pub ghat: PoleResidueForm<T>,
    /// Zeros of `G`, one between each pair of consecutive poles.
    pub zeros: Vec<T>,
    pub rec_a: T,
    /// `beta_l > 0`, one per zero.
    pub rec_residues: Vec<T>,
    /// Indices into `zeros` of the poles shared by both Weyl functions:
    /// the unmovable points, then `K` when it is a zero of `G`.
    pub common: Vec<usize>,
    pub site: usize,
    pub dim: usize,
}

impl<T: Real> GHatExpansion<T> {
    pub fn eval(&self, x: T) -> T {
        self.ghat.eval(x)
    }
}

/// The single zero of an increasing `f` inside `(lo, hi)` by bisection.
fn bisect_zero<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T) -> Result<T> {
    let two = T::one() + T::one();
    let (mut l, mut h) = (lo, hi);
    loop {
        let mid = l + (h - l) / two;
        if mid <= l || mid >= h {
            break;
        }
        let v = f(mid);
        if v == T::zero() {
            return Ok(mid);
        }
        if v < T::zero() {
            l = mid;
        } else {
            h = mid;
        }
    }
    let z = l + (h - l) / two;
    if z <= lo || z >= hi {
        return Err(SpectralError::ZeroBracketFailure { lo: lo.as_f64(), hi: hi.as_f64() });
    }
    Ok(z)
}

/// Builds `G` from the data.
///
/// Residues at the poles of `N` come from partial fractions of
/// `(theta^2 - N(x)) / ((1 - theta^2)(x - K))`; when `K` is a common point its
/// residue is `(N(K) - theta^2) / (1 - theta^2)`, which vanishes in the
/// common-zero case. Unmovable points carry no residue and are left out.
pub fn build_ghat<T: Real>(
    d: &SpectralData<T>,
    cls: &DataClassification<T>,
    tol: &TolerancePolicy<T>,
) -> Result<GHatExpansion<T>> {
    let spread = d.spread();
    let ratio = TwoSpectraRatio::new(&d.sigma, &d.sigma_hat, spread, tol);
    let th = cls.theta_sq;
    let scale = T::one() - th;

    let mut poles = Vec::new();
    let mut alphas = Vec::new();
    for (i, p) in ratio.poles().iter().enumerate() {
        let rho = ratio.residue(i);
        poles.push(*p);
        alphas.push(rho / (scale * (*p - d.k)));
    }
    if cls.k_case == KCase::KCommonPole {
        let nk = ratio.value(d.k)?;
        let at = poles.partition_point(|p| *p < d.k);
        poles.insert(at, d.k);
        alphas.insert(at, (nk - th) / scale);
    }
    for (p, a) in poles.iter().zip(&alphas) {
        if !(*a > T::zero()) {
            return Err(SpectralError::NegativeResidue { pole: p.as_f64(), residue: a.as_f64() });
        }
    }
    let total = alphas.iter().fold(T::zero(), |s, a| s + *a);
    if (total - T::one()).abs() > tol.rel_tol.sqrt() {
        return Err(SpectralError::VerificationFailed(format!("residues of G sum to {total}, not 1")));
    }
    let alphas: Vec<T> = alphas.into_iter().map(|a| a / total).collect();
    let ghat = PoleResidueForm::new(poles, alphas)?;

    let mut zeros = Vec::with_capacity(ghat.len().saturating_sub(1));
    for w in ghat.poles().windows(2) {
        zeros.push(bisect_zero(|x| ghat.eval(x), w[0], w[1])?);
    }

    // Snap the zeros that must sit on data points exactly onto them.
    let mut targets: Vec<T> = cls.mu.clone();
    if cls.k_case == KCase::KCommonZero {
        targets.push(d.k);
    }
    let mut common = Vec::with_capacity(targets.len());
    for m in targets {
        let nearest =
            (0..zeros.len()).min_by(|&i, &k| (zeros[i] - m).abs().partial_cmp(&(zeros[k] - m).abs()).expect("finite"));
        match nearest {
            Some(i) if tol.close(zeros[i], m, spread) && !common.contains(&i) => {
                zeros[i] = m;
                common.push(i);
            }
            _ => return Err(SpectralError::VerificationFailed(format!("common point {m} is not a zero of G"))),
        }
    }

    let rec_a = ghat.poles().iter().zip(ghat.residues()).fold(T::zero(), |s, (p, a)| s + *p * *a);
    let rec_residues = zeros.iter().map(|z| ghat.derivative(*z).recip()).collect();
    Ok(GHatExpansion { ghat, zeros, rec_a, rec_residues, common, site: d.site, dim: d.dim() })
}
