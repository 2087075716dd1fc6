//! Dense kernels shared by every solver: the matrix type, normal-equation
//! least squares, the leading singular triple and the reconstruction
//! objective.

mod matrix;
mod solve;
mod svd;

pub use matrix::{axpy, dist_sq_scaled, dot, norm, DenseMatrix};
pub use solve::{factor_gram, least_squares, solve_gram_multi, Cholesky, GramFactor, CONDITION_LIMIT, RIDGE_SCALE};
pub use svd::{rank1_svd, rank1_svd_default, SingularTriple, DEFAULT_MAX_ITER, DEFAULT_TOL};

use crate::error::{Error, Result};
use crate::sparse::SparseCoeff;

/// `Y − A X`, touching only the structural entries of `X`.
pub fn residual(y: &DenseMatrix, a: &DenseMatrix, x: &SparseCoeff) -> Result<DenseMatrix> {
    check_shapes(y, a, x)?;
    let mut r = y.clone();
    for j in 0..x.p() {
        for (i, v) in x.col_entries(j) {
            if v != 0.0 {
                axpy(-v, a.col(i), r.col_mut(j));
            }
        }
    }
    if !r.is_finite() {
        return Err(Error::NonFinite("residual Y - AX".into()));
    }
    Ok(r)
}

/// `‖Y − A X‖²_F`.
pub fn objective(y: &DenseMatrix, a: &DenseMatrix, x: &SparseCoeff) -> Result<f64> {
    Ok(residual(y, a, x)?.frobenius_sq())
}

/// Per-column `‖y_j − A x_j‖₂`.
pub fn column_errors(y: &DenseMatrix, a: &DenseMatrix, x: &SparseCoeff) -> Result<Vec<f64>> {
    Ok(residual(y, a, x)?.column_norms())
}

pub(crate) fn check_shapes(y: &DenseMatrix, a: &DenseMatrix, x: &SparseCoeff) -> Result<()> {
    if y.rows() != a.rows() || a.cols() != x.n() || x.p() != y.cols() {
        return Err(Error::invalid(format!(
            "shapes do not conform: Y {}x{}, A {}x{}, X {}x{}",
            y.rows(),
            y.cols(),
            a.rows(),
            a.cols(),
            x.n(),
            x.p()
        )));
    }
    Ok(())
}
