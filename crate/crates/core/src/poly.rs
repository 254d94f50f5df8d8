//! Three-term recurrences attached to a Jacobi matrix.
//!
//! Polynomials are only ever evaluated pointwise; nothing here builds a
//! coefficient vector. All evaluators work over any [`Field`], so the same
//! code runs in floating point and in exact rational arithmetic.

use crate::error::{Result, SpectralError};
use crate::model::{JacobiMatrix, PerturbationParams};
use crate::perturb::apply_perturbation;
use crate::scalar::{Field, Real};

/// Values of a polynomial family at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySequence<T> {
    pub at: T,
    /// `P_0..P_{N-1}` for the first kind, `phi_n..phi_N` for the second kind.
    pub values: Vec<T>,
}

/// `P_0(x), ..., P_{N-1}(x)` with `P_{-1} = 0`, `P_0 = 1` and
/// `P_{i+1} = ((x - a_i) P_i - b_{i-1} P_{i-1}) / b_i`.
pub fn eval_first_kind<T: Field>(j: &JacobiMatrix<T>, x: T) -> PolySequence<T> {
    let (a, b) = (j.diag(), j.offdiag());
    let n = j.dim();
    let mut values = Vec::with_capacity(n);
    if n > 0 {
        values.push(T::one());
    }
    for i in 0..n.saturating_sub(1) {
        let mut next = (x.clone() - a[i].clone()) * values[i].clone();
        if i > 0 {
            next = next - b[i - 1].clone() * values[i - 1].clone();
        }
        values.push(next / b[i].clone());
    }
    PolySequence { at: x, values }
}

/// Second-kind polynomials `phi_n(x), ..., phi_N(x)` anchored at `site`:
/// `phi_n = 0`, `phi_{n+1} = 1 / b_n`, then the same recurrence as the first
/// kind, with `b_{N-1}` taken as 1.
pub fn eval_second_kind<T: Field>(j: &JacobiMatrix<T>, site: usize, x: T) -> Result<PolySequence<T>> {
    j.check_site(site)?;
    let (a, b) = (j.diag(), j.offdiag());
    let n = j.dim();
    let coupling = |i: usize| if i + 1 == n { T::one() } else { b[i].clone() };
    let mut values = Vec::with_capacity(n - site + 1);
    values.push(T::zero());
    values.push(T::one() / coupling(site));
    for i in site + 2..=n {
        let k = i - site;
        let mut next = (x.clone() - a[i - 1].clone()) * values[k - 1].clone();
        if i >= site + 3 {
            next = next - b[i - 2].clone() * values[k - 2].clone();
        }
        values.push(next / coupling(i - 1));
    }
    Ok(PolySequence { at: x, values })
}

/// `Q_N(x) = (x - a_{N-1}) P_{N-1}(x) - b_{N-2} P_{N-2}(x)`, which equals
/// `det(x - J) / (b_0 ... b_{N-2})`.
pub fn eval_qn<T: Field>(j: &JacobiMatrix<T>, x: T) -> T {
    let p = eval_first_kind(j, x.clone());
    qn_from_first_kind(j, &p)
}

pub(crate) fn qn_from_first_kind<T: Field>(j: &JacobiMatrix<T>, p: &PolySequence<T>) -> T {
    let n = j.dim();
    let last = (p.at.clone() - j.diag()[n - 1].clone()) * p.values[n - 1].clone();
    if n >= 2 {
        last - j.offdiag()[n - 2].clone() * p.values[n - 2].clone()
    } else {
        last
    }
}

/// `det(x - J)` by the continuant recurrence.
pub fn char_poly<T: Field>(j: &JacobiMatrix<T>, x: T) -> T {
    let (a, b) = (j.diag(), j.offdiag());
    let mut prev = T::one();
    let mut cur = x.clone() - a[0].clone();
    for i in 1..j.dim() {
        let next = (x.clone() - a[i].clone()) * cur.clone() - b[i - 1].clone() * b[i - 1].clone() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Principal block with rows and columns `lo..=hi`.
pub fn submatrix<T: Clone>(j: &JacobiMatrix<T>, lo: usize, hi: usize) -> Result<JacobiMatrix<T>> {
    if lo > hi || hi >= j.dim() {
        return Err(SpectralError::EmptyRange { lo, hi });
    }
    Ok(JacobiMatrix::new_unchecked(j.diag()[lo..=hi].to_vec(), j.offdiag()[lo..hi].to_vec()))
}

/// Scale factor relating the perturbed and unperturbed `Q_N`.
///
/// Equals `theta^(2 - d)` where `d` is the number of off-diagonal entries
/// touching the site: 1 for interior sites, `theta` at either end of a chain
/// with `N >= 2`, and `theta^2` when `N = 1`.
pub fn gamma_factor<T: Real>(dim: usize, site: usize, theta: T) -> T {
    let touching = usize::from(site > 0) + usize::from(site + 1 < dim);
    match touching {
        2 => T::one(),
        1 => theta,
        _ => theta * theta,
    }
}

/// `Q~_N(x) - Gamma(n) (Q_N(x) + A(x) phi_N(x) P_n(x))` with
/// `A(x) = x (1/theta^2 - 1) - M`. Vanishes identically.
pub fn qtilde_identity_residual<T: Real>(j: &JacobiMatrix<T>, params: &PerturbationParams<T>, x: T) -> Result<T> {
    let jt = apply_perturbation(j, params)?;
    let p = eval_first_kind(j, x);
    let qn = qn_from_first_kind(j, &p);
    let phi = eval_second_kind(j, params.site, x)?;
    let phi_n = *phi.values.last().expect("nonempty");
    let amp = x * (params.theta_sq.recip() - T::one()) - params.m;
    let gamma = gamma_factor(j.dim(), params.site, params.theta());
    Ok(eval_qn(&jt, x) - gamma * (qn + amp * phi_n * p.values[params.site]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_a, fixture_b, fixture_c};
    use crate::perturb::perturbation_from;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn ja() -> JacobiMatrix<f64> {
        fixture_a().j
    }

    fn jb() -> JacobiMatrix<f64> {
        fixture_b().j
    }

    #[test]
    fn first_kind_examples() {
        assert_eq!(eval_first_kind(&ja(), 1.0).values, vec![1.0, 1.0]);
        assert_eq!(eval_first_kind(&ja(), 3.0).values, vec![1.0, -1.0]);
        let one = JacobiMatrix::new(vec![5.0], vec![]).unwrap();
        assert_eq!(eval_first_kind(&one, 123.0).values, vec![1.0]);
    }

    #[test]
    fn second_kind_examples() {
        assert_eq!(eval_second_kind(&jb(), 1, 0.0).unwrap().values, vec![0.0, -1.0, 2.0]);
        assert_eq!(eval_second_kind(&ja(), 0, 2.0).unwrap().values, vec![0.0, -1.0, 0.0]);
        let last = eval_second_kind(&jb(), 2, 0.7).unwrap().values;
        assert_eq!(last, vec![0.0, 1.0]);
        assert!(eval_second_kind(&jb(), 3, 0.0).is_err());
    }

    #[test]
    fn qn_examples() {
        assert_eq!(eval_qn(&ja(), 1.0), 0.0);
        assert_eq!(eval_qn(&ja(), 0.0), -3.0);
        let one = JacobiMatrix::new(vec![5.0], vec![]).unwrap();
        assert_eq!(eval_qn(&one, 5.0), 0.0);
    }

    #[test]
    fn submatrix_examples() {
        assert_eq!(submatrix(&jb(), 0, 0).unwrap().diag(), &[2.0]);
        assert_eq!(submatrix(&jb(), 2, 2).unwrap().diag(), &[2.0]);
        let s = submatrix(&jb(), 0, 1).unwrap();
        assert_eq!((s.diag(), s.offdiag()), (&[2.0, 2.0][..], &[-1.0][..]));
        assert!(matches!(submatrix(&jb(), 2, 1), Err(SpectralError::EmptyRange { .. })));
    }

    #[test]
    fn qtilde_identity_on_fixtures() {
        let a = fixture_a::<f64>();
        assert!(qtilde_identity_residual(&a.j, &a.params, 0.5).unwrap().abs() < 1e-12);
        let b = fixture_b::<f64>();
        assert!(qtilde_identity_residual(&b.j, &b.params, -2.0).unwrap().abs() < 1e-12);
        let c = fixture_c::<f64>();
        assert!(qtilde_identity_residual(&c.j, &c.params, 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn qtilde_identity_one_by_one() {
        let j = JacobiMatrix::new(vec![3.0f64], vec![]).unwrap();
        let p = perturbation_from(0.5, 1.0, 0).unwrap();
        for x in [-2.0, 0.0, 1.5, 7.0] {
            assert!(qtilde_identity_residual(&j, &p, x).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn exact_rational_evaluation() {
        let r = |p: i64| BigRational::from_integer(BigInt::from(p));
        let j = JacobiMatrix::new_unchecked(vec![r(2), r(2), r(2)], vec![r(-1), r(-1)]);
        // (x-2)((x-2)^2 - 2) at x = 0 is -4; b_0 b_1 = 1.
        assert_eq!(char_poly(&j, r(0)), r(-4));
        assert_eq!(eval_qn(&j, r(0)), r(-4));
        assert_eq!(eval_qn(&j, r(2)), r(0));
    }
}
