use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::model::JacobiMatrix;
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

/// Which end of the reconstructed matrix the Weyl function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    AnchorFirst,
    AnchorLast,
}

fn dot<T: Real>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |s, (a, b)| s + *a * *b)
}

/// The Jacobi matrix whose Weyl function at the anchored end is
/// `sum residues_i / (poles_i - x)`.
///
/// Runs the Stieltjes procedure on the discrete measure as Lanczos on
/// `diag(poles)` started from `sqrt(residues)`, with full
/// reorthogonalization. Residues are normalized to unit mass first.
pub fn reconstruct_weyl<T: Real>(
    poles: &[T],
    residues: &[T],
    orientation: Orientation,
    tol: &TolerancePolicy<T>,
) -> Result<JacobiMatrix<T>> {
    let m = poles.len();
    if m == 0 || residues.len() != m {
        return Err(SpectralError::MeasureDegenerate(m as f64));
    }
    for (p, r) in poles.iter().zip(residues) {
        if !(*r > T::zero()) {
            return Err(SpectralError::NegativeResidue { pole: p.as_f64(), residue: r.as_f64() });
        }
    }
    let spread = TolerancePolicy::spread(poles.iter().copied());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &k| poles[i].partial_cmp(&poles[k]).expect("finite poles"));
    for w in order.windows(2) {
        if tol.close(poles[w[0]], poles[w[1]], spread) {
            return Err(SpectralError::MeasureDegenerate(poles[w[1]].as_f64()));
        }
    }

    let total = residues.iter().fold(T::zero(), |s, r| s + *r);
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(m);
    basis.push(residues.iter().map(|r| (*r / total).sqrt()).collect());
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m.saturating_sub(1));
    for k in 0..m {
        let q = &basis[k];
        let mut r: Vec<T> = q.iter().zip(poles).map(|(x, p)| *x * *p).collect();
        let alpha = dot(q, &r);
        a.push(alpha);
        if k + 1 == m {
            break;
        }
        // Two passes of classical Gram-Schmidt against every earlier vector.
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &r);
                for (ri, vi) in r.iter_mut().zip(v) {
                    *ri = *ri - c * *vi;
                }
            }
        }
        let beta = dot(&r, &r).sqrt();
        if !(beta > T::epsilon() * spread) {
            return Err(SpectralError::MeasureDegenerate(beta.as_f64()));
        }
        b.push(-beta);
        basis.push(r.into_iter().map(|x| x / beta).collect());
    }
    let j = JacobiMatrix::new_unchecked(a, b);
    Ok(match orientation {
        Orientation::AnchorFirst => j,
        Orientation::AnchorLast => j.reversed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::green_nn_spectral;

    fn tol() -> TolerancePolicy<f64> {
        TolerancePolicy::default()
    }

    #[test]
    fn examples() {
        let j = reconstruct_weyl(&[2.0], &[1.0], Orientation::AnchorFirst, &tol()).unwrap();
        assert_eq!(j.diag(), &[2.0]);
        let j = reconstruct_weyl(&[1.0, 3.0], &[0.5, 0.5], Orientation::AnchorFirst, &tol()).unwrap();
        assert!((j.diag()[0] - 2.0).abs() < 1e-14 && (j.diag()[1] - 2.0).abs() < 1e-14);
        assert!((j.offdiag()[0] + 1.0).abs() < 1e-14);
        let j = reconstruct_weyl(&[1.0, 3.0], &[2.0 / 3.0, 1.0 / 3.0], Orientation::AnchorFirst, &tol()).unwrap();
        assert!((j.diag()[0] - 5.0 / 3.0).abs() < 1e-14);
        assert!((j.diag()[1] - 7.0 / 3.0).abs() < 1e-14);
        assert!((j.offdiag()[0] + 8f64.sqrt() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn anchor_last_reverses() {
        let f = reconstruct_weyl(&[1.0, 3.0], &[2.0 / 3.0, 1.0 / 3.0], Orientation::AnchorFirst, &tol()).unwrap();
        let l = reconstruct_weyl(&[1.0, 3.0], &[2.0 / 3.0, 1.0 / 3.0], Orientation::AnchorLast, &tol()).unwrap();
        assert_eq!(l, f.reversed());
    }

    #[test]
    fn weyl_function_reproduced() {
        let poles = [-1.5, 0.2, 0.9, 4.0];
        let res = [0.1, 0.4, 0.3, 0.2];
        let j = reconstruct_weyl(&poles, &res, Orientation::AnchorFirst, &tol()).unwrap();
        for x in [-3.0, 0.5, 2.0, 7.5] {
            let want: f64 = poles.iter().zip(&res).map(|(p, r)| r / (p - x)).sum();
            assert!((green_nn_spectral(&j, 0, x, &tol()).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_measures() {
        assert!(matches!(
            reconstruct_weyl(&[1.0, 1.0], &[0.5, 0.5], Orientation::AnchorFirst, &tol()),
            Err(SpectralError::MeasureDegenerate(_))
        ));
        assert!(matches!(
            reconstruct_weyl(&[1.0, 2.0], &[0.5, -0.5], Orientation::AnchorFirst, &tol()),
            Err(SpectralError::NegativeResidue { .. })
        ));
    }
}
