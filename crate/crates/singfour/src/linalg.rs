use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, SymmetricEigen, Vector2, Vector3};

use crate::{Error, Result};

/// Damped Newton iteration for a square system.
///
/// Stops once the residual norm drops below `tol`, then takes one more step
/// so the returned root carries a margin below `tol`.
pub(crate) fn newton<F>(system: F, x0: DVector<f64>, tol: f64, max_iter: usize) -> Result<DVector<f64>>
where
    F: Fn(&DVector<f64>) -> (DVector<f64>, DMatrix<f64>),
{
    let mut x = x0;
    let (mut r, mut jac) = system(&x);
    for it in 0..max_iter {
        let rn = r.norm();
        if !rn.is_finite() {
            return Err(Error::NoConvergence(it));
        }
        if rn <= tol {
            if let Some(dx) = jac.clone().lu().solve(&r) {
                let x1 = &x - dx;
                let (r1, _) = system(&x1);
                if r1.norm() <= rn {
                    return Ok(x1);
                }
            }
            return Ok(x);
        }
        let dx = jac.clone().lu().solve(&r).ok_or(Error::NoConvergence(it))?;
        let mut step = 1.0;
        loop {
            let trial = &x - &dx * step;
            let (rt, jt) = system(&trial);
            if rt.norm() < rn || step < 1e-4 {
                x = trial;
                r = rt;
                jac = jt;
                break;
            }
            step *= 0.5;
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// Orthonormal pair spanning the plane orthogonal to `n`.
pub(crate) fn tangent_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let u = n.normalize();
    let k = (0..3)
        .min_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs()))
        .unwrap_or(0);
    let e = Vector3::ith(k, 1.0);
    let t1 = (e - u * u.dot(&e)).normalize();
    let t2 = u.cross(&t1);
    (t1, t2)
}

/// Eigenpairs of a symmetric 3×3 matrix in descending eigenvalue order.
pub(crate) fn sym_eigen3(m: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = Vector3::from_fn(|k, _| eig.eigenvalues[idx[k]]);
    let vecs = Matrix3::from_fn(|r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Eigenpairs of a symmetric 2×2 matrix in descending eigenvalue order.
pub(crate) fn sym_eigen2(m: &Matrix2<f64>) -> (Vector2<f64>, Matrix2<f64>) {
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let (a, b) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let vals = Vector2::new(eig.eigenvalues[a], eig.eigenvalues[b]);
    let vecs = Matrix2::from_columns(&[eig.eigenvectors.column(a).into_owned(), eig.eigenvectors.column(b).into_owned()]);
    (vals, vecs)
}
