//! Continued fraction of a Weyl function by polynomial division.
//!
//! With `m(x) = sum g_i / (f_i - x) = -r(x) / q(x)`, `q = prod (x - f_i)` and
//! unit mass, each step divides `q` by `r`:
//! `q / r = x - a_0 + b_0^2 m_1(x)`. Works over any field; with exact
//! rationals it is an independent check of [`super::reconstruct_weyl`].

use crate::error::{Result, SpectralError};
use crate::scalar::Field;

/// Coefficients, lowest degree first.
type Poly<T> = Vec<T>;

fn trim<T: Field>(mut p: Poly<T>) -> Poly<T> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn mul_linear<T: Field>(p: &[T], root: &T) -> Poly<T> {
    let mut out = vec![T::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] = out[i + 1].clone() + c.clone();
        out[i] = out[i].clone() - c.clone() * root.clone();
    }
    out
}

fn scale<T: Field>(p: &[T], s: &T) -> Poly<T> {
    p.iter().map(|c| c.clone() * s.clone()).collect()
}

/// `(quotient, remainder)` of `num / den`.
fn divide<T: Field>(num: &[T], den: &[T]) -> (Poly<T>, Poly<T>) {
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut rem: Poly<T> = num.to_vec();
    if rem.len() <= dd {
        return (vec![T::zero()], rem);
    }
    let mut quot = vec![T::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone() / lead.clone();
        for (i, d) in den.iter().enumerate() {
            rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
        }
        quot[k] = c;
    }
    rem.truncate(dd.max(1));
    (quot, trim(rem))
}

/// `(a, b^2)` of the Jacobi matrix anchored at its first site whose Weyl
/// function is `sum residues_i / (poles_i - x)`, residues scaled to unit mass.
pub fn euclid_continued_fraction<T: Field>(poles: &[T], residues: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let m = poles.len();
    if m == 0 || residues.len() != m {
        return Err(SpectralError::MeasureDegenerate(m as f64));
    }
    let total = residues.iter().fold(T::zero(), |s, r| s + r.clone());
    let mut q: Poly<T> = vec![T::one()];
    for f in poles {
        q = mul_linear(&q, f);
    }
    let mut r: Poly<T> = vec![T::zero(); m];
    for (i, g) in residues.iter().enumerate() {
        let mut term = vec![g.clone() / total.clone()];
        for (k, f) in poles.iter().enumerate() {
            if k != i {
                term = mul_linear(&term, f);
            }
        }
        for (c, t) in r.iter_mut().zip(term) {
            *c = c.clone() + t;
        }
    }
    let r = trim(r);
    let lead = r.last().cloned().unwrap_or_else(T::zero);
    if !(lead > T::zero()) {
        return Err(SpectralError::MeasureDegenerate(0.0));
    }
    let mut r = scale(&r, &(T::one() / lead));

    let mut a = Vec::with_capacity(m);
    let mut b_sq = Vec::with_capacity(m.saturating_sub(1));
    loop {
        let (quot, rem) = divide(&q, &r);
        // quot = x - a_k because r is monic of degree one less than q.
        if quot.len() != 2 || !quot[1].is_one() {
            return Err(SpectralError::MeasureDegenerate(a.len() as f64));
        }
        a.push(-quot[0].clone());
        if r.len() == 1 {
            break;
        }
        // rem / r = b^2 m_1 = -b^2 r_1 / r with r_1 monic.
        let lead = rem.last().cloned().unwrap_or_else(T::zero);
        if rem.len() + 1 != r.len() || !(lead < T::zero()) {
            return Err(SpectralError::MeasureDegenerate(a.len() as f64));
        }
        b_sq.push(-lead.clone());
        q = r;
        r = scale(&rem, &(T::one() / lead));
    }
    Ok((a, b_sq))
}
