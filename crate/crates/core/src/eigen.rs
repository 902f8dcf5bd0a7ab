//! Cyclic Jacobi eigenvalue iteration for dense symmetric matrices.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Relative symmetry tolerance accepted by [`eig_symmetric`].
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Convergence target: off-diagonal Frobenius norm below `OFF_DIAGONAL_TOL·‖S‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// All eigenvalues of a symmetric matrix, sorted ascending.
///
/// The input must be symmetric within `SYMMETRY_TOL·max(1, max|S_ij|)`; it is
/// symmetrized before iterating.
pub fn eig_symmetric(s: &Matrix) -> Result<Vec<f64>> {
    if !s.is_square() {
        return Err(Error::Dimension {
            context: "eigensolver needs a square matrix",
            expected: s.rows(),
            found: s.cols(),
        });
    }
    let n = s.rows();
    let scale = s.as_slice().iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let asym = s.asymmetry();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Asymmetric { max_deviation: asym });
    }
    if s.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::Parameter("eigensolver input has non-finite entries".into()));
    }

    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (s[(i, j)] + s[(j, i)]));
    let target = OFF_DIAGONAL_TOL * a.norm_frobenius();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut eigenvalues = a.diagonal();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(eigenvalues)
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Applies the rotation `A ← PᵀAP` that annihilates `A[p][q]`.
fn rotate(a: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let n = a.rows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::make_complete;

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < tol, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn diagonal_input() {
        let d = Matrix::from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        assert_eq!(eig_symmetric(&d).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn reflection() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_close(&eig_symmetric(&m).unwrap(), &[-1.0, 1.0], 1e-14);
    }

    #[test]
    fn triangle_laplacian() {
        // det(L - λI) = -λ(λ - 3)² for K₃.
        let l = make_complete(3, 1.0).unwrap().laplacian();
        assert_close(&eig_symmetric(&l).unwrap(), &[0.0, 3.0, 3.0], 1e-13);
    }

    #[test]
    fn path_laplacian_closed_form() {
        // Path on n nodes: eigenvalues 2 - 2cos(kπ/n), k = 0..n-1.
        let n = 9;
        let a = Matrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        let l = crate::network::laplacian(&a);
        let want: Vec<f64> = (0..n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / n as f64).cos())
            .collect();
        assert_close(&eig_symmetric(&l).unwrap(), &want, 1e-12);
    }

    #[test]
    fn rejects_asymmetric_and_rectangular() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(eig_symmetric(&m), Err(Error::Asymmetric { .. })));
        assert!(eig_symmetric(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn empty_and_zero() {
        assert!(eig_symmetric(&Matrix::zeros(0, 0)).unwrap().is_empty());
        assert_eq!(eig_symmetric(&Matrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
    }
}
