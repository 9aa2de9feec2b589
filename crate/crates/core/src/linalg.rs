//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest admissible 2-norm condition number for Gram systems.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("condition number {condition:.3e} exceeds {limit:.1e}")]
    IllConditioned { condition: f64, limit: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(A + Aᴴ)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(a)).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition of the Hermitian part: (ascending eigenvalues, eigenvectors as columns).
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(a.nrows(), order.len(), |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Projection onto the PSD cone in Frobenius norm (negative eigenvalues clipped).
pub fn psd_projection(a: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(a);
    let clipped = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::new(v.max(0.0), 0.0)),
    );
    &vectors * CMatrix::from_diagonal(&clipped) * vectors.adjoint()
}

/// `λ_max/λ_min` for a Hermitian positive definite matrix.
pub fn hpd_condition(a: &CMatrix) -> Result<f64, LinalgError> {
    let ev = hermitian_eigenvalues(a);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if lo <= 0.0 {
        return Err(LinalgError::NotPositiveDefinite);
    }
    Ok(hi / lo)
}

/// Cholesky factor of a Hermitian positive definite matrix after the condition guard.
pub fn guarded_cholesky(a: &CMatrix) -> Result<Cholesky<Complex64, Dyn>, LinalgError> {
    if a.nrows() != a.ncols() {
        return Err(LinalgError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let condition = hpd_condition(a)?;
    if condition > CONDITION_LIMIT {
        return Err(LinalgError::IllConditioned {
            condition,
            limit: CONDITION_LIMIT,
        });
    }
    Cholesky::new(hermitian_part(a)).ok_or(LinalgError::NotPositiveDefinite)
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `max_ij |a_ij − b_ij|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
