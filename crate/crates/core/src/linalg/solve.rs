//! Normal-equation least squares with a Cholesky factor and ridge rescue.

use log::debug;

use super::matrix::{dot, DenseMatrix};
use crate::error::{Error, Result};

/// Gram matrices whose estimated condition number exceeds this are
/// regularized before solving.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Ridge weight relative to the mean diagonal of the Gram matrix.
pub const RIDGE_SCALE: f64 = 1e-10;

/// Lower-triangular Cholesky factor `G = L Lᵀ`, stored row-major and packed.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    // row i occupies l[i*(i+1)/2 .. i*(i+1)/2 + i + 1]
    l: Vec<f64>,
}

impl Cholesky {
    pub fn empty() -> Self {
        Self { n: 0, l: Vec::new() }
    }

    /// Factors a symmetric matrix given column-major. Returns `None` when a
    /// pivot is not strictly positive.
    pub fn factor(gram: &DenseMatrix) -> Option<Self> {
        let n = gram.rows();
        let mut chol = Self::empty();
        for i in 0..n {
            let cross: Vec<f64> = (0..i).map(|j| gram.get(i, j)).collect();
            if !chol.push(&cross, gram.get(i, i)) {
                return None;
            }
        }
        Some(chol)
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        let start = i * (i + 1) / 2;
        &self.l[start..start + i + 1]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Appends one variable to the factored system. `cross` holds the Gram
    /// entries against the existing variables and `diag` the new diagonal.
    /// Returns `false` (leaving the factor unchanged) if the extended matrix
    /// is not positive definite.
    pub fn push(&mut self, cross: &[f64], diag: f64) -> bool {
        debug_assert_eq!(cross.len(), self.n);
        let mut w = cross.to_vec();
        for i in 0..self.n {
            let ri = self.row(i);
            let s = w[i] - dot(&ri[..i], &w[..i]);
            w[i] = s / ri[i];
        }
        let d = diag - dot(&w, &w);
        // a pivot at rounding level means the new column is dependent
        if !(d > 64.0 * f64::EPSILON * diag.abs()) || !d.is_finite() {
            return false;
        }
        w.push(d.sqrt());
        self.l.extend_from_slice(&w);
        self.n += 1;
        true
    }

    /// Cheap condition estimate `(max Lᵢᵢ / min Lᵢᵢ)²`.
    pub fn condition_estimate(&self) -> f64 {
        if self.n == 0 {
            return 1.0;
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..self.n {
            let d = self.row(i)[i];
            lo = lo.min(d);
            hi = hi.max(d);
        }
        (hi / lo).powi(2)
    }

    /// Solves `L Lᵀ x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        debug_assert_eq!(b.len(), self.n);
        for i in 0..self.n {
            let ri = self.row(i);
            b[i] = (b[i] - dot(&ri[..i], &b[..i])) / ri[i];
        }
        for i in (0..self.n).rev() {
            let mut s = b[i];
            for j in i + 1..self.n {
                s -= self.row(j)[i] * b[j];
            }
            b[i] = s / self.row(i)[i];
        }
    }
}

/// A factored Gram matrix, possibly regularized.
#[derive(Debug, Clone)]
pub struct GramFactor {
    pub chol: Cholesky,
    /// Ridge weight that was added to the diagonal, zero if none.
    pub ridge: f64,
    pub condition: f64,
}

/// Factors `gram`, adding a small ridge when the matrix is singular or its
/// condition estimate is above [`CONDITION_LIMIT`].
pub fn factor_gram(gram: &DenseMatrix) -> Result<GramFactor> {
    let k = gram.rows();
    if gram.cols() != k {
        return Err(Error::invalid("Gram matrix must be square"));
    }
    let mut condition = f64::INFINITY;
    if let Some(chol) = Cholesky::factor(gram) {
        condition = chol.condition_estimate();
        if condition <= CONDITION_LIMIT {
            return Ok(GramFactor {
                chol,
                ridge: 0.0,
                condition,
            });
        }
    }
    let trace: f64 = (0..k).map(|i| gram.get(i, i)).sum();
    if !(trace > 0.0) {
        return Err(Error::Numerical {
            message: "Gram matrix has zero trace".into(),
            condition,
        });
    }
    let ridge = RIDGE_SCALE * trace / k as f64;
    let mut shifted = gram.clone();
    for i in 0..k {
        shifted.set(i, i, gram.get(i, i) + ridge);
    }
    debug!("ridge {ridge:e} added to {k}x{k} Gram (condition estimate {condition:e})");
    match Cholesky::factor(&shifted) {
        Some(chol) => Ok(GramFactor {
            condition: chol.condition_estimate(),
            chol,
            ridge,
        }),
        None => Err(Error::Numerical {
            message: "Gram matrix not positive definite after ridge".into(),
            condition,
        }),
    }
}

/// Least-squares solution of `min ‖y − A x‖₂`.
///
/// Solved through the normal equations; when no ridge was needed one step of
/// iterative refinement is applied, which keeps the residual orthogonal to
/// the columns of `A` to near machine precision for well-conditioned systems.
pub fn least_squares(a: &DenseMatrix, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != a.rows() {
        return Err(Error::invalid(format!(
            "right-hand side has length {} but matrix has {} rows",
            y.len(),
            a.rows()
        )));
    }
    let factor = factor_gram(&a.gram())?;
    let mut x = a.tr_mul_vec(y)?;
    factor.chol.solve_in_place(&mut x);
    if factor.ridge == 0.0 {
        let ax = a.mul_vec(&x)?;
        let r: Vec<f64> = y.iter().zip(&ax).map(|(yi, v)| yi - v).collect();
        let mut delta = a.tr_mul_vec(&r)?;
        factor.chol.solve_in_place(&mut delta);
        for (xi, d) in x.iter_mut().zip(&delta) {
            *xi += d;
        }
    }
    Ok(x)
}

/// Solves `G Z = B` for every column of `B` with a single factorization.
pub fn solve_gram_multi(gram: &DenseMatrix, rhs: &DenseMatrix) -> Result<(DenseMatrix, GramFactor)> {
    if gram.rows() != rhs.rows() {
        return Err(Error::invalid("Gram and right-hand side row counts differ"));
    }
    let factor = factor_gram(gram)?;
    let mut out = rhs.clone();
    for j in 0..out.cols() {
        factor.chol.solve_in_place(out.col_mut(j));
    }
    if !out.is_finite() {
        return Err(Error::NonFinite("Gram solve produced non-finite values".into()));
    }
    Ok((out, factor))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_single_column() {
        let a = DenseMatrix::identity(2).unwrap();
        let x = least_squares(&a, &[3.0, -1.0]).unwrap();
        assert_eq!(x, vec![3.0, -1.0]);

        let a = DenseMatrix::from_rows(&[[2.0], [0.0]]).unwrap();
        let x = least_squares(&a, &[4.0, 0.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_invalid() {
        let a = DenseMatrix::identity(3).unwrap();
        assert!(matches!(least_squares(&a, &[1.0, 2.0]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn duplicate_columns_engage_ridge() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0], [0.0, 0.0], [1.0, 1.0]]).unwrap();
        let factor = factor_gram(&a.gram()).unwrap();
        assert!(factor.ridge > 0.0);
        let x = least_squares(&a, &[2.0, 0.0, 2.0]).unwrap();
        // Any split of the weight reproduces y.
        assert!((x[0] + x[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn zero_matrix_is_numerical_error() {
        let a = DenseMatrix::zeros(3, 2).unwrap();
        let err = least_squares(&a, &[1.0, 2.0, 3.0]).unwrap_err();
        assert!(matches!(err, Error::Numerical { .. }));
    }

    #[test]
    fn incremental_factor_matches_batch() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.5, 0.2], [0.0, 1.0, 0.3], [0.4, 0.1, 1.0], [0.2, 0.2, 0.2]]).unwrap();
        let g = a.gram();
        let full = Cholesky::factor(&g).unwrap();
        let mut inc = Cholesky::empty();
        for i in 0..3 {
            let cross: Vec<f64> = (0..i).map(|j| g.get(i, j)).collect();
            assert!(inc.push(&cross, g.get(i, i)));
        }
        let mut b1 = vec![1.0, 2.0, 3.0];
        let mut b2 = b1.clone();
        full.solve_in_place(&mut b1);
        inc.solve_in_place(&mut b2);
        assert_eq!(b1, b2);
        // Pushing a dependent column fails and leaves the factor alone.
        assert!(!inc.push(&[g.get(0, 0), g.get(0, 1), g.get(0, 2)], g.get(0, 0)));
        assert_eq!(inc.dim(), 3);
    }
}
