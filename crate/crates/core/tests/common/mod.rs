//! Test-only oracles and instance generators. Nothing here calls the
//! library's numerical routines except where a function says so.
#![allow(dead_code)]

use jacobi_inverse::{
    apply_perturbation, eigenvalues, eigenvector_weights, perturbation_from, submatrix, JacobiMatrix64,
    PerturbationParams64, SpectralData64, Spectrum, Tolerance64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_jacobi(rng: &mut ChaCha8Rng, n: usize) -> JacobiMatrix64 {
    let a = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let b = (0..n.saturating_sub(1)).map(|_| -rng.gen_range(0.25..2.0)).collect();
    JacobiMatrix64::new(a, b).unwrap()
}

/// Mirror-symmetric matrix of odd size `n`: `a_i = a_{n-1-i}`, `b_i = b_{n-2-i}`.
pub fn random_mirror_jacobi(rng: &mut ChaCha8Rng, n: usize) -> JacobiMatrix64 {
    assert!(n % 2 == 1);
    let half_a: Vec<f64> = (0..=n / 2).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let half_b: Vec<f64> = (0..n / 2).map(|_| -rng.gen_range(0.25..2.0)).collect();
    let a = (0..n).map(|i| half_a[i.min(n - 1 - i)]).collect();
    let b = (0..n - 1).map(|i| half_b[i.min(n - 2 - i)]).collect();
    JacobiMatrix64::new(a, b).unwrap()
}

pub fn dense(j: &JacobiMatrix64) -> Vec<Vec<f64>> {
    let n = j.dim();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = j.diag()[i];
        if i + 1 < n {
            m[i][i + 1] = j.offdiag()[i];
            m[i + 1][i] = j.offdiag()[i];
        }
    }
    m
}

/// `det(x I - A)` by Gaussian elimination with partial pivoting.
pub fn det_shifted(a: &[Vec<f64>], x: f64) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|k| if i == k { x - a[i][k] } else { -a[i][k] }).collect()).collect();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &k| m[i][c].abs().partial_cmp(&m[k][c].abs()).unwrap()).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest.iter_mut() {
            let f = row[c] / pivot[c];
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Roots of the characteristic polynomial from sign changes on a grid over
/// the Gershgorin interval, refined by bisection. The grid is refined until
/// all `N` roots are separated.
pub fn oracle_eigenvalues(j: &JacobiMatrix64) -> Vec<f64> {
    let m = dense(j);
    let n = m.len();
    let radius: f64 = (0..n).map(|i| m[i].iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let (lo, hi) = (-radius - 1.0, radius + 1.0);
    let f = |x: f64| det_shifted(&m, x);
    let mut points = 2000;
    loop {
        let h = (hi - lo) / points as f64;
        let mut roots = Vec::new();
        let mut prev_x = lo;
        let mut prev = f(lo);
        for i in 1..=points {
            let x = lo + h * i as f64;
            let v = f(x);
            if v == 0.0 {
                roots.push(x);
            } else if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                let (mut a, mut b, sa) = (prev_x, x, prev > 0.0);
                loop {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    let fm = f(mid);
                    if fm == 0.0 {
                        a = mid;
                        b = mid;
                        break;
                    }
                    if (fm > 0.0) == sa {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev_x = x;
            prev = v;
        }
        if roots.len() == n || points > 2_000_000 {
            return roots;
        }
        points *= 8;
    }
}

/// A forward instance; spectra come from the library's eigenvalue routine.
#[derive(Debug, Clone)]
pub struct Instance {
    pub j: JacobiMatrix64,
    pub params: PerturbationParams64,
    pub j_tilde: JacobiMatrix64,
    pub sigma: Vec<f64>,
    pub sigma_hat: Vec<f64>,
}

impl Instance {
    pub fn data(&self) -> SpectralData64 {
        SpectralData64 {
            sigma: Spectrum::new_unchecked(self.sigma.clone()),
            sigma_hat: Spectrum::new_unchecked(self.sigma_hat.clone()),
            k: self.params.k,
            site: self.params.site,
            theta_sq: Some(self.params.theta_sq),
        }
    }

    pub fn spread(&self) -> f64 {
        self.sigma.iter().chain(&self.sigma_hat).chain([&self.params.k]).fold(1.0, |s, x| s.max(x.abs()))
    }

    /// Every two points of `sigma`, `sigma_hat` and `K` either coincide by
    /// construction (to rounding) or are resolvable well above the tie
    /// tolerance, and so are the eigenvector weights at the site (zero or
    /// not). Random draws occasionally land in between, where the data cannot
    /// tell a common point from a distinct pair. Uses the library's
    /// eigenvector weights.
    pub fn well_conditioned(&self) -> bool {
        let w = eigenvector_weights(&self.j, self.params.site, &Tolerance64::default()).unwrap();
        let weights_ok = w.weights.iter().all(|x| *x <= 1e-12 || *x >= 1e-4);
        weights_ok && self.well_separated()
    }

    fn well_separated(&self) -> bool {
        let mut pts: Vec<f64> = self.sigma.iter().chain(&self.sigma_hat).chain([&self.params.k]).copied().collect();
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let spread = self.spread();
        pts.windows(2).all(|w| {
            let gap = w[1] - w[0];
            gap <= 1e-12 * spread || gap >= 1e-6 * spread
        })
    }
}

pub fn forward(j: &JacobiMatrix64, site: usize, theta_sq: f64, k: f64) -> Instance {
    let tol = Tolerance64::default();
    let params = perturbation_from(theta_sq, k, site).unwrap();
    let j_tilde = apply_perturbation(j, &params).unwrap();
    let sigma = eigenvalues(j, &tol).unwrap().into_vec();
    let sigma_hat = eigenvalues(&j_tilde, &tol).unwrap().into_vec();
    Instance { j: j.clone(), params, j_tilde, sigma, sigma_hat }
}

/// Where to put `K` relative to the spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KPlacement {
    Generic,
    AtEigenvalue,
    AtZeroOfG,
}

/// Eigenvalues of the blocks above and below `site`.
pub fn block_spectra(j: &JacobiMatrix64, site: usize) -> Vec<f64> {
    let tol = Tolerance64::default();
    let n = j.dim();
    let mut out = Vec::new();
    if site > 0 {
        out.extend(eigenvalues(&submatrix(j, 0, site - 1).unwrap(), &tol).unwrap().into_vec());
    }
    if site + 1 < n {
        out.extend(eigenvalues(&submatrix(j, site + 1, n - 1).unwrap(), &tol).unwrap().into_vec());
    }
    out
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, placement: KPlacement) -> Instance {
    loop {
        let n = rng.gen_range(1..=max_n);
        let j = random_jacobi(rng, n);
        let site = rng.gen_range(0..n);
        let theta_sq = rng.gen_range(0.1..0.9);
        let tol = Tolerance64::default();
        let k = match placement {
            KPlacement::Generic => rng.gen_range(-5.0..5.0),
            KPlacement::AtEigenvalue => {
                let s = eigenvalues(&j, &tol).unwrap().into_vec();
                s[rng.gen_range(0..s.len())]
            }
            KPlacement::AtZeroOfG => {
                let z = block_spectra(&j, site);
                if z.is_empty() {
                    continue;
                }
                z[rng.gen_range(0..z.len())]
            }
        };
        let inst = forward(&j, site, theta_sq, k);
        if inst.well_conditioned() {
            return inst;
        }
    }
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Expected first failed condition of supplied-`theta_sq` data, computed
/// directly from the definitions with plain products.
pub fn oracle_first_failed(d: &SpectralData64) -> Option<&'static str> {
    let s = d.sigma.values();
    let h = d.sigma_hat.values();
    let k = d.k;
    let th = d.theta_sq.expect("oracle needs thetaSq");
    if s.windows(2).any(|w| w[1] <= w[0]) || h.windows(2).any(|w| w[1] <= w[0]) {
        return Some("I");
    }
    let spread = s.iter().chain(h).chain([&k]).fold(1.0f64, |m, x| m.max(x.abs()));
    let eq = |x: f64, y: f64| (x - y).abs() <= 1e-9 * spread;

    // Interlacing.
    let p = s.iter().filter(|x| **x < k && !eq(**x, k)).count();
    let in_closed_open = |x: f64, l: f64, r: f64| (eq(x, l) || x > l) && !eq(x, r) && x < r;
    let in_open_closed = |x: f64, l: f64, r: f64| !eq(x, l) && x > l && (eq(x, r) || x < r);
    let mut counts = Vec::new();
    let count = |pred: &dyn Fn(f64) -> bool| h.iter().filter(|x| pred(**x)).count();
    for j in 1..p {
        counts.push(count(&|x| in_closed_open(x, s[j - 1], s[j])));
    }
    if p >= 1 {
        counts.push(count(&|x| in_closed_open(x, s[p - 1], k)));
    }
    if p < s.len() && !eq(k, s[p]) {
        counts.push(count(&|x| in_open_closed(x, k, s[p])));
    }
    for j in p + 1..s.len() {
        counts.push(count(&|x| in_open_closed(x, s[j - 1], s[j])));
    }
    if counts.iter().any(|c| *c != 1) {
        return Some("I");
    }

    // N with coincident pairs removed.
    let mut zeros: Vec<f64> = h.to_vec();
    let mut poles = Vec::new();
    for x in s {
        if let Some(i) = zeros.iter().position(|z| eq(*z, *x)) {
            zeros.remove(i);
        } else {
            poles.push(*x);
        }
    }
    let nhat = |x: f64| zeros.iter().map(|z| x - z).product::<f64>() / poles.iter().map(|p| x - p).product::<f64>();
    let mu: Vec<f64> = s.iter().copied().filter(|x| !eq(*x, k) && h.iter().any(|y| eq(*x, *y))).collect();
    let q = mu.len();
    let n_tilde = d.site.min(s.len() - d.site - 1);
    let loose = 1e-6;

    if !(th > 0.0 && th < 1.0) || mu.iter().any(|m| (nhat(*m) - th).abs() > loose) {
        return Some("II");
    }
    let k_in_s = s.iter().any(|x| eq(*x, k));
    let k_in_h = h.iter().any(|x| eq(*x, k));
    if !k_in_s && !k_in_h {
        if q > n_tilde || (nhat(k) - th).abs() > loose {
            return Some("III");
        }
        return None;
    }
    if k_in_s != k_in_h {
        return Some("IV");
    }
    let nk = nhat(k);
    if (nk - th).abs() <= loose {
        let step = 1e-5 * spread;
        let dn = (nhat(k + step) - nhat(k - step)) / (2.0 * step);
        if q >= n_tilde || dn.abs() > loose.sqrt() {
            return Some("IV.b");
        }
        return None;
    }
    if q > n_tilde || nk <= th {
        return Some("IV.a");
    }
    None
}
