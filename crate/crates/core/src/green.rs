//! The diagonal Green's function `G(x, n, n) = <e_n, (J - x)^-1 e_n>` by
//! three independent routes, and the ratio of characteristic polynomials
//! `N(x) = prod (x - sigma_hat_j) / prod (x - sigma_j)`.
//!
//! * [`green_nn_poly`] uses the recurrences only: `-phi_N P_n / Q_N`.
//! * [`green_nn_spectral`] sums `w_k / (l_k - x)` over the eigenpairs.
//! * [`green_nn_two_spectra`] needs only the two spectra and the perturbation
//!   parameters: `(theta^2 - N(x)) / ((1 - theta^2)(x - K))`.

use crate::eigen::eigenvector_weights;
use crate::error::{Result, SpectralError};
use crate::model::{JacobiMatrix, Spectrum};
use crate::poly::{eval_first_kind, eval_second_kind, qn_from_first_kind};
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

pub fn green_nn_poly<T: Real>(j: &JacobiMatrix<T>, site: usize, x: T) -> Result<T> {
    let p = eval_first_kind(j, x);
    let phi = eval_second_kind(j, site, x)?;
    let qn = qn_from_first_kind(j, &p);
    let n = j.dim();
    // Magnitude of the two terms whose difference is Q_N.
    let mut scale = ((x.abs() + j.diag()[n - 1].abs()) * p.values[n - 1]).abs();
    if n >= 2 {
        scale = scale + (j.offdiag()[n - 2] * p.values[n - 2]).abs();
    }
    if qn.abs() <= TolerancePolicy::<T>::default().eigen_tol * scale || qn == T::zero() {
        return Err(SpectralError::PoleAtPoint(x.as_f64()));
    }
    let phi_n = *phi.values.last().expect("nonempty");
    Ok(-(phi_n * p.values[site]) / qn)
}

pub fn green_nn_spectral<T: Real>(j: &JacobiMatrix<T>, site: usize, x: T, tol: &TolerancePolicy<T>) -> Result<T> {
    let ws = eigenvector_weights(j, site, tol)?;
    let spread = TolerancePolicy::spread(ws.values.values().iter().copied().chain([x]));
    let mut g = T::zero();
    for (k, (&l, &w)) in ws.values.values().iter().zip(&ws.weights).enumerate() {
        if (l - x).abs() <= tol.eigen_tol * spread {
            if ws.vanishes(k, tol) {
                continue;
            }
            return Err(SpectralError::PoleAtPoint(x.as_f64()));
        }
        g = g + w / (l - x);
    }
    Ok(g)
}

/// `N(x) = prod (x - sigma_hat_j) / prod (x - sigma_j)`.
///
/// Points of the two spectra that coincide at tolerance are paired. A pair
/// contributes its exact factor `(x - h) / (x - s)` away from the pair and
/// cancels within tolerance of it, which makes the common points removable.
#[derive(Debug, Clone)]
pub struct TwoSpectraRatio<T> {
    numer: Vec<T>,
    denom: Vec<T>,
    pairs: Vec<(T, T)>,
    spread: T,
    tol: TolerancePolicy<T>,
}

impl<T: Real> TwoSpectraRatio<T> {
    /// `spread` must cover both spectra and every point the ratio will be
    /// evaluated at.
    pub fn new(sigma: &Spectrum<T>, sigma_hat: &Spectrum<T>, spread: T, tol: &TolerancePolicy<T>) -> Self {
        let (s, h) = (sigma.values(), sigma_hat.values());
        let mut numer = Vec::with_capacity(h.len());
        let mut denom = Vec::with_capacity(s.len());
        let mut pairs = Vec::new();
        let (mut i, mut k) = (0, 0);
        while i < s.len() && k < h.len() {
            if tol.close(s[i], h[k], spread) {
                pairs.push((s[i], h[k]));
                i += 1;
                k += 1;
            } else if s[i] < h[k] {
                denom.push(s[i]);
                i += 1;
            } else {
                numer.push(h[k]);
                k += 1;
            }
        }
        denom.extend_from_slice(&s[i..]);
        numer.extend_from_slice(&h[k..]);
        Self { numer, denom, pairs, spread, tol: *tol }
    }

    /// Zeros with no partner in `sigma`.
    pub fn zeros(&self) -> &[T] {
        &self.numer
    }

    /// Poles with no partner in `sigma_hat`.
    pub fn poles(&self) -> &[T] {
        &self.denom
    }

    /// Coincident `(sigma, sigma_hat)` pairs.
    pub fn pairs(&self) -> &[(T, T)] {
        &self.pairs
    }

    fn check_pole(&self, x: T) -> Result<()> {
        if self.denom.iter().any(|d| self.tol.close(*d, x, self.spread)) {
            Err(SpectralError::PoleAtPoint(x.as_f64()))
        } else {
            Ok(())
        }
    }

    fn active_pairs(&self, x: T) -> impl Iterator<Item = &(T, T)> + '_ {
        self.pairs
            .iter()
            .filter(move |(s, h)| !self.tol.close(x, *s, self.spread) && !self.tol.close(x, *h, self.spread))
    }

    /// `(R, x - z, S)` with `z` the zero nearest to `x`, `R` the product of
    /// every other factor and `S` the logarithmic derivative of `R`, so that
    /// `N = R (x - z)` and `N' = R (1 + (x - z) S)`. `skip` leaves one pole out.
    fn split(&self, x: T, skip: Option<usize>) -> (T, T, T) {
        let nearest = (0..self.numer.len())
            .min_by(|&i, &k| (x - self.numer[i]).abs().partial_cmp(&(x - self.numer[k]).abs()).expect("finite"));
        let mut ratio = T::one();
        let mut log_der = T::zero();
        let others = self.numer.iter().enumerate().filter(|(i, _)| Some(*i) != nearest);
        let mut dens = self.denom.iter().enumerate().filter(|(i, _)| Some(*i) != skip);
        // Alternate multiplications and divisions to keep the product in range.
        for (_, z) in others {
            let dz = x - *z;
            log_der = log_der + dz.recip();
            ratio = ratio * dz;
            if let Some((_, p)) = dens.next() {
                ratio = ratio / (x - *p);
            }
        }
        for (_, p) in dens {
            ratio = ratio / (x - *p);
        }
        for (i, p) in self.denom.iter().enumerate() {
            if Some(i) != skip {
                log_der = log_der - (x - *p).recip();
            }
        }
        for (s, h) in self.active_pairs(x) {
            ratio = ratio * ((x - *h) / (x - *s));
            log_der = log_der + (x - *h).recip() - (x - *s).recip();
        }
        let picked = nearest.map(|i| x - self.numer[i]).unwrap_or_else(T::one);
        (ratio, picked, log_der)
    }

    pub fn value(&self, x: T) -> Result<T> {
        self.check_pole(x)?;
        let (r, d, _) = self.split(x, None);
        Ok(r * d)
    }

    /// Exact derivative by logarithmic differentiation; well defined at the
    /// zeros of `N` as well.
    pub fn derivative(&self, x: T) -> Result<T> {
        self.check_pole(x)?;
        let (r, d, s) = self.split(x, None);
        if self.numer.is_empty() {
            Ok(r * s)
        } else {
            Ok(r * (T::one() + d * s))
        }
    }

    /// `lim (x - p) N(x)` at the unpaired pole `poles()[index]`.
    pub fn residue(&self, index: usize) -> T {
        let (r, d, _) = self.split(self.denom[index], Some(index));
        r * d
    }

    fn sensitivity(&self, x: T, power: i32) -> T {
        let term = |p: T| (x - p).abs().powi(power).recip();
        let single = self.numer.iter().chain(&self.denom).fold(T::zero(), |s, p| s + term(*p));
        self.active_pairs(x).fold(single, |s, (a, b)| s + term(*a) + term(*b))
    }

    /// Agreement tolerance for values of `N` at `x`: the change in `N` when
    /// every remaining point moves by `rel_tol * spread`, floored at `rel_tol`.
    pub fn value_tolerance(&self, x: T) -> Result<T> {
        let v = self.value(x)?.abs();
        Ok(self.tol.rel_tol * (T::one() + self.spread * v * self.sensitivity(x, 1)))
    }

    /// Same model for `N'`.
    pub fn derivative_tolerance(&self, x: T) -> Result<T> {
        let v = self.value(x)?.abs();
        let dv = self.derivative(x)?.abs();
        let s1 = self.sensitivity(x, 1);
        let s2 = self.sensitivity(x, 2);
        Ok(self.tol.rel_tol * (self.spread.recip() + self.spread * (v * s2 + dv * s1)))
    }
}

fn spread_of<T: Real>(sigma: &Spectrum<T>, sigma_hat: &Spectrum<T>, extra: &[T]) -> T {
    TolerancePolicy::spread(sigma.values().iter().chain(sigma_hat.values()).chain(extra).copied())
}

pub fn rational_n<T: Real>(sigma: &Spectrum<T>, sigma_hat: &Spectrum<T>, x: T, tol: &TolerancePolicy<T>) -> Result<T> {
    TwoSpectraRatio::new(sigma, sigma_hat, spread_of(sigma, sigma_hat, &[x]), tol).value(x)
}

pub fn rational_n_derivative<T: Real>(
    sigma: &Spectrum<T>,
    sigma_hat: &Spectrum<T>,
    x: T,
    tol: &TolerancePolicy<T>,
) -> Result<T> {
    TwoSpectraRatio::new(sigma, sigma_hat, spread_of(sigma, sigma_hat, &[x]), tol).derivative(x)
}

/// `G(x) = (theta^2 - N(x)) / ((1 - theta^2)(x - K))`.
///
/// At `x = K` the singularity is removable exactly when `N(K) = theta^2`;
/// the value there is `-N'(K) / (1 - theta^2)`.
pub fn green_nn_two_spectra<T: Real>(
    sigma: &Spectrum<T>,
    sigma_hat: &Spectrum<T>,
    theta_sq: T,
    k: T,
    x: T,
    tol: &TolerancePolicy<T>,
) -> Result<T> {
    if !(theta_sq > T::zero() && theta_sq < T::one()) {
        return Err(SpectralError::InvalidTheta(theta_sq.as_f64()));
    }
    let spread = spread_of(sigma, sigma_hat, &[x, k]);
    let ratio = TwoSpectraRatio::new(sigma, sigma_hat, spread, tol);
    let scale = T::one() - theta_sq;
    if tol.close(x, k, spread) {
        let nk = ratio.value(k)?;
        if (nk - theta_sq).abs() <= ratio.value_tolerance(k)? {
            return Ok(-ratio.derivative(k)? / scale);
        }
        return Err(SpectralError::PoleAtK { k: k.as_f64(), n_at_k: nk.as_f64(), theta_sq: theta_sq.as_f64() });
    }
    let n = ratio.value(x)?;
    Ok((theta_sq - n) / (scale * (x - k)))
}
