//! Dense eigen/SVD wrappers over nalgebra with the error mapping used by the
//! spectral engine.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::expalg::Cplx;

const MAX_ITER: usize = 10_000;

/// `‖A − Aᴴ‖_F / ‖A‖_F`.
pub fn hermitian_defect(m: &DMatrix<Cplx>) -> f64 {
    let n = m.norm();
    if n == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / n
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(m: &DMatrix<Cplx>) -> Result<(Vec<f64>, DMatrix<Cplx>)> {
    let h = (m + m.adjoint()) * Cplx::new(0.5, 0.0);
    let e = SymmetricEigen::try_new(h, f64::EPSILON, MAX_ITER)
        .ok_or_else(|| Error::NoConvergence("Hermitian eigensolver".into()))?;
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), idx.len(), |r, c| e.eigenvectors[(r, idx[c])]);
    Ok((vals, vecs))
}

/// Eigenpairs of a general complex matrix from its Schur form; vectors have
/// unit 2-norm. Order is that of the Schur diagonal.
pub fn eig_general(m: &DMatrix<Cplx>) -> Result<(Vec<Cplx>, DMatrix<Cplx>)> {
    let n = m.nrows();
    let s = Schur::try_new(m.clone(), f64::EPSILON, MAX_ITER)
        .ok_or_else(|| Error::NoConvergence("complex Schur decomposition".into()))?;
    let (q, t) = s.unpack();
    let floor = f64::EPSILON * t.norm().max(f64::MIN_POSITIVE);
    let mut vals = Vec::with_capacity(n);
    let mut vecs = DMatrix::zeros(n, n);
    for k in 0..n {
        let lam = t[(k, k)];
        let mut y = DVector::<Cplx>::zeros(n);
        y[k] = Cplx::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Cplx::default();
            for l in j + 1..=k {
                s += t[(j, l)] * y[l];
            }
            let mut d = t[(j, j)] - lam;
            if d.norm() < floor {
                d = Cplx::new(floor, 0.0);
            }
            y[j] = -s / d;
        }
        let mut v = &q * y;
        let nv = v.norm();
        if !nv.is_finite() || nv == 0.0 {
            return Err(Error::NoConvergence(format!("eigenvector {k} back-substitution")));
        }
        v /= Cplx::new(nv, 0.0);
        vecs.set_column(k, &v);
        vals.push(lam);
    }
    Ok((vals, vecs))
}

/// Eigenvalues only; Hermitian input (to `herm_tol`) gets real values.
pub fn eigenvalues(m: &DMatrix<Cplx>, herm_tol: f64) -> Result<Vec<Cplx>> {
    if hermitian_defect(m) <= herm_tol {
        let (v, _) = eig_hermitian(m)?;
        return Ok(v.into_iter().map(|x| Cplx::new(x, 0.0)).collect());
    }
    Ok(eig_general(m)?.0)
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<Cplx>) -> Result<Vec<f64>> {
    let s = SVD::try_new(m.clone(), false, false, f64::EPSILON, MAX_ITER)
        .ok_or_else(|| Error::NoConvergence("SVD".into()))?;
    let mut v: Vec<f64> = s.singular_values.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}

/// Rotates `v` so its largest-magnitude entry is real and positive.
pub fn fix_phase(v: &mut [Cplx]) {
    let Some(big) = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
    else {
        return;
    };
    if big.norm() == 0.0 {
        return;
    }
    let rot = big.conj() / big.norm();
    for x in v.iter_mut() {
        *x *= rot;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expalg::c;

    #[test]
    fn general_eigenpairs_satisfy_definition() {
        let m = DMatrix::from_fn(6, 6, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.3 + 0.1));
        let (vals, vecs) = eig_general(&m).unwrap();
        for (k, &val) in vals.iter().enumerate() {
            let v = vecs.column(k);
            let r = (&m * v - v * val).norm();
            assert!(r < 1e-12 * m.norm(), "{k}: {r}");
        }
    }

    #[test]
    fn hermitian_eigenvalues_ascend() {
        let m = DMatrix::from_fn(5, 5, |i, j| if i == j { c(5.0 - i as f64, 0.0) } else { c(0.0, 0.0) });
        let (v, _) = eig_hermitian(&m).unwrap();
        assert_eq!(v, vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn phase_fix() {
        let mut v = vec![c(0.1, 0.0), c(0.0, -2.0)];
        fix_phase(&mut v);
        assert!((v[1] - c(2.0, 0.0)).norm() < 1e-15);
    }
}
