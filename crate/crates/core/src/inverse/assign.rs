use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::ghat::GHatExpansion;
use super::weyl::{reconstruct_weyl, Orientation};
use crate::conditions::{DataClassification, KCase};
use crate::eigen::{eigenvalues, eigenvector_weights};
use crate::error::{Result, SpectralError};
use crate::model::{JacobiMatrix, SpectralData};
use crate::perturb::{apply_perturbation, perturbation_from};
use crate::poly::submatrix;
use crate::scalar::Real;
use crate::tolerance::TolerancePolicy;

/// A split of the zeros of `G` between the left Weyl function (`minus`, the
/// block above the site) and the right one (`plus`). Entries are indices into
/// [`GHatExpansion::zeros`]; `common` zeros belong to both sides and each
/// carries one split parameter.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PoleAssignment {
    pub minus: Vec<usize>,
    pub plus: Vec<usize>,
    pub common: Vec<usize>,
}

impl PoleAssignment {
    pub fn dimension(&self) -> usize {
        self.common.len()
    }
}

/// `C(available, choose)` as the string `"C(a,b)"`, and the number of
/// non-common zeros each family sends to the left block.
pub fn count_formula<T: Real>(exp: &GHatExpansion<T>, cls: &DataClassification<T>) -> (String, i64, i64) {
    let (n, q, dim) = (exp.site as i64, cls.q as i64, exp.dim as i64);
    if cls.k_case == KCase::KCommonZero {
        let (a, b) = (dim - 2 * q - 3, n - q - 1);
        (format!("C({a},{b})"), a, b)
    } else {
        let (a, b) = (dim - 2 * q - 1, n - q);
        (format!("C({a},{b})"), a, b)
    }
}

/// Every assignment, in lexicographic order of the left-block choice.
pub fn enumerate_assignments<T: Real>(
    exp: &GHatExpansion<T>,
    cls: &DataClassification<T>,
) -> Result<Vec<PoleAssignment>> {
    let free: Vec<usize> = (0..exp.zeros.len()).filter(|i| !exp.common.contains(i)).collect();
    let (_, available, choose) = count_formula(exp, cls);
    if choose < 0 || available < 0 || choose > available || available as usize != free.len() {
        return Err(SpectralError::InfeasibleCounts { choose, available: free.len() });
    }
    let mut common = exp.common.clone();
    common.sort_unstable();
    Ok(free
        .iter()
        .copied()
        .combinations(choose as usize)
        .map(|minus| {
            let plus = free.iter().copied().filter(|i| !minus.contains(i)).collect();
            PoleAssignment { minus, plus, common: common.clone() }
        })
        .collect())
}

/// Poles and unnormalized residues of one side, sorted by pole.
fn side<T: Real>(exp: &GHatExpansion<T>, own: &[usize], common: &[(usize, T)]) -> (Vec<T>, Vec<T>) {
    let mut pairs: Vec<(T, T)> = own
        .iter()
        .map(|&i| (exp.zeros[i], exp.rec_residues[i]))
        .chain(common.iter().map(|&(i, w)| (exp.zeros[i], w * exp.rec_residues[i])))
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
    pairs.into_iter().unzip()
}

fn total<T: Real>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |s, x| s + *x)
}

/// Largest deviation between computed and prescribed spectra.
fn spectral_residual<T: Real>(
    j: &JacobiMatrix<T>,
    jt: &JacobiMatrix<T>,
    d: &SpectralData<T>,
    tol: &TolerancePolicy<T>,
) -> Result<T> {
    let s = eigenvalues(j, tol)?;
    let st = eigenvalues(jt, tol)?;
    Ok(s.max_abs_diff(&d.sigma).max(st.max_abs_diff(&d.sigma_hat)))
}

/// The pair `(J, J~)` of one family at split parameters `t`.
///
/// Returns the pair and its spectral residual, which is checked against
/// `10 * rel_tol * spread`.
pub fn assemble_solution<T: Real>(
    exp: &GHatExpansion<T>,
    asg: &PoleAssignment,
    t: &[T],
    cls: &DataClassification<T>,
    d: &SpectralData<T>,
    tol: &TolerancePolicy<T>,
) -> Result<(JacobiMatrix<T>, JacobiMatrix<T>, T)> {
    if t.len() != asg.common.len() || t.iter().any(|x| !(*x > T::zero() && *x < T::one())) {
        return Err(SpectralError::VerificationFailed(format!(
            "expected {} split parameters in (0,1)",
            asg.common.len()
        )));
    }
    let n = exp.site;
    let dim = exp.dim;
    let plus_split: Vec<(usize, T)> = asg.common.iter().copied().zip(t.iter().copied()).collect();
    let minus_split: Vec<(usize, T)> = asg.common.iter().copied().zip(t.iter().map(|x| T::one() - *x)).collect();
    let (pp, pr) = side(exp, &asg.plus, &plus_split);
    let (mp, mr) = side(exp, &asg.minus, &minus_split);
    if mp.len() != n || pp.len() + n + 1 != dim {
        return Err(SpectralError::InfeasibleCounts { choose: mp.len() as i64, available: n });
    }

    let mut a = Vec::with_capacity(dim);
    let mut b = Vec::with_capacity(dim - 1);
    if n > 0 {
        let left = reconstruct_weyl(&mp, &mr, Orientation::AnchorLast, tol)?;
        let (la, lb) = left.into_parts();
        a.extend(la);
        b.extend(lb);
        b.push(-total(&mr).sqrt());
    }
    a.push(exp.rec_a);
    if n + 1 < dim {
        b.push(-total(&pr).sqrt());
        let right = reconstruct_weyl(&pp, &pr, Orientation::AnchorFirst, tol)?;
        let (ra, rb) = right.into_parts();
        a.extend(ra);
        b.extend(rb);
    }
    let j = JacobiMatrix::new(a, b)?;
    let params = perturbation_from(cls.theta_sq, d.k, n)?;
    let jt = apply_perturbation(&j, &params)?;

    let residual = spectral_residual(&j, &jt, d, tol)?;
    let bound = T::lit(10.0) * tol.rel_tol * d.spread();
    if !(residual <= bound) {
        return Err(SpectralError::VerificationFailed(format!(
            "spectral residual {residual} exceeds {bound} at t = {:?}",
            t.iter().map(|x| x.as_f64()).collect::<Vec<_>>()
        )));
    }
    Ok((j, jt, residual))
}

/// The assignment and split parameters under which `j` appears in the
/// solution set of its own spectral data.
///
/// Zeros of `G` are attributed to the block whose spectrum they belong to;
/// at a common zero `nu_l` the split is `t_l = b_n^2 w_l / beta_l`, where
/// `w_l` is the weight of `nu_l` at the first site of the right block.
pub fn family_coordinates<T: Real>(
    j: &JacobiMatrix<T>,
    exp: &GHatExpansion<T>,
    tol: &TolerancePolicy<T>,
) -> Result<(PoleAssignment, Vec<T>)> {
    let n = exp.site;
    let dim = j.dim();
    let spread = TolerancePolicy::spread(exp.zeros.iter().copied().chain(exp.ghat.poles().iter().copied()));
    let near = |xs: &[T], z: T| xs.iter().any(|x| (*x - z).abs() <= T::lit(1e3) * tol.rel_tol * spread);
    let left = if n > 0 { eigenvalues(&submatrix(j, 0, n - 1)?, tol)?.into_vec() } else { Vec::new() };
    let right_w = if n + 1 < dim { Some(eigenvector_weights(&submatrix(j, n + 1, dim - 1)?, 0, tol)?) } else { None };
    let right: Vec<T> = right_w.as_ref().map(|w| w.values.values().to_vec()).unwrap_or_default();

    let mut minus = Vec::new();
    let mut plus = Vec::new();
    for (i, z) in exp.zeros.iter().enumerate() {
        if exp.common.contains(&i) {
            continue;
        }
        if near(&left, *z) {
            minus.push(i);
        } else if near(&right, *z) {
            plus.push(i);
        } else {
            return Err(SpectralError::VerificationFailed(format!("zero {z} of G is in neither block")));
        }
    }
    let mut common = exp.common.clone();
    common.sort_unstable();
    let mut t = Vec::with_capacity(common.len());
    match &right_w {
        None => t.resize(common.len(), T::zero()),
        Some(w) => {
            let bn_sq = j.offdiag()[n] * j.offdiag()[n];
            for &i in &common {
                let z = exp.zeros[i];
                let k = (0..right.len())
                    .min_by(|&x, &y| (right[x] - z).abs().partial_cmp(&(right[y] - z).abs()).expect("finite"))
                    .ok_or_else(|| SpectralError::VerificationFailed("empty right block".into()))?;
                t.push(bn_sq * w.weights[k] / exp.rec_residues[i]);
            }
        }
    }
    Ok((PoleAssignment { minus, plus, common }, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::classify;
    use crate::fixtures::{fixture_a, fixture_b, fixture_c, fixture_d};
    use crate::inverse::build_ghat;

    fn tol() -> TolerancePolicy<f64> {
        TolerancePolicy::default()
    }

    fn prepare(d: &SpectralData<f64>) -> (DataClassification<f64>, GHatExpansion<f64>) {
        let cls = classify(d, &tol()).unwrap();
        let exp = build_ghat(d, &cls, &tol()).unwrap();
        (cls, exp)
    }

    #[test]
    fn fixture_counts() {
        for (f, dim, formula) in
            [(fixture_a::<f64>(), 0, "C(1,0)"), (fixture_b(), 1, "C(0,0)"), (fixture_c(), 1, "C(0,0)")]
        {
            let (cls, exp) = prepare(&f.data());
            let asg = enumerate_assignments(&exp, &cls).unwrap();
            assert_eq!(asg.len(), 1, "fixture {}", f.name);
            assert_eq!(asg[0].dimension(), dim);
            assert_eq!(count_formula(&exp, &cls).0, formula);
        }
    }

    #[test]
    fn fixture_a_reassembled() {
        let f = fixture_a::<f64>();
        let d = f.data();
        let (cls, exp) = prepare(&d);
        let asg = enumerate_assignments(&exp, &cls).unwrap();
        let (j, jt, res) = assemble_solution(&exp, &asg[0], &[], &cls, &d, &tol()).unwrap();
        assert!(j.max_abs_diff(&f.j) < 1e-12);
        assert!(jt.max_abs_diff(&f.j_tilde) < 1e-12);
        assert!(res < 1e-12);
    }

    #[test]
    fn fixture_b_family() {
        let f = fixture_b::<f64>();
        let d = f.data();
        let (cls, exp) = prepare(&d);
        let asg = enumerate_assignments(&exp, &cls).unwrap();
        let (j, jt, _) = assemble_solution(&exp, &asg[0], &[0.5], &cls, &d, &tol()).unwrap();
        assert!(j.max_abs_diff(&f.j) < 1e-12);
        assert!(jt.max_abs_diff(&f.j_tilde) < 1e-12);
        let (j, _, _) = assemble_solution(&exp, &asg[0], &[0.25], &cls, &d, &tol()).unwrap();
        let want = JacobiMatrix::new(vec![2.0, 2.0, 2.0], vec![-(1.5f64.sqrt()), -(0.5f64.sqrt())]).unwrap();
        assert!(j.max_abs_diff(&want) < 1e-12);
        assert!(assemble_solution(&exp, &asg[0], &[1.0], &cls, &d, &tol()).is_err());
    }

    #[test]
    fn fixture_c_and_d() {
        let c = fixture_c::<f64>();
        let d = c.data();
        let (cls, exp) = prepare(&d);
        let asg = enumerate_assignments(&exp, &cls).unwrap();
        let (j, jt, _) = assemble_solution(&exp, &asg[0], &[0.5], &cls, &d, &tol()).unwrap();
        assert!(j.max_abs_diff(&c.j) < 1e-12);
        assert!(jt.max_abs_diff(&c.j_tilde) < 1e-12);

        let f = fixture_d::<f64>();
        let d = f.data_with_theta();
        let (cls, exp) = prepare(&d);
        let asg = enumerate_assignments(&exp, &cls).unwrap();
        assert_eq!(asg.len(), 1);
        let (j, jt, _) = assemble_solution(&exp, &asg[0], &[], &cls, &d, &tol()).unwrap();
        assert!(j.max_abs_diff(&f.j) < 1e-12);
        assert!(jt.max_abs_diff(&f.j_tilde) < 1e-12);
    }

    #[test]
    fn coordinates_of_fixture_b() {
        let f = fixture_b::<f64>();
        let (_, exp) = prepare(&f.data());
        let (asg, t) = family_coordinates(&f.j, &exp, &tol()).unwrap();
        assert_eq!(asg.common, vec![0]);
        assert!((t[0] - 0.5).abs() < 1e-12);
    }
}
