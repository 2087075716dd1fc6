use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, least_squares, norm, DenseMatrix};

/// Correlations at or below this fraction of `‖y‖₂` count as a vanished
/// residual and end the pursuit early.
pub const ZERO_RESIDUAL_TOL: f64 = 1e-12;

/// Result of a single-sample pursuit.
#[derive(Debug, Clone, PartialEq)]
pub struct OmpOutcome {
    /// Selected atoms in selection order.
    pub support: Vec<usize>,
    /// Coefficients aligned with `support`.
    pub coeffs: Vec<f64>,
    /// `‖r‖₂` before the first step and after every step.
    pub residual_norms: Vec<f64>,
    /// Set when the residual vanished before `k` atoms were chosen.
    pub exhausted: bool,
}

impl OmpOutcome {
    /// `(atom, coefficient)` pairs sorted by atom index.
    pub fn sorted_pairs(&self) -> Vec<(usize, f64)> {
        let mut v: Vec<_> = self.support.iter().copied().zip(self.coeffs.iter().copied()).collect();
        v.sort_by_key(|e| e.0);
        v
    }
}

/// Orthogonal matching pursuit of `y` over the columns of `a`, assumed to
/// have unit norm.
///
/// Each step adds the unselected atom with the largest `|aᵢᵀ r|` (lowest
/// index on ties) and refits all selected coefficients by least squares.
pub fn omp(y: &[f64], a: &DenseMatrix, k: usize) -> Result<OmpOutcome> {
    let (m, n) = a.shape();
    if y.len() != m {
        return Err(Error::invalid(format!(
            "sample length {} but dictionary has {m} rows",
            y.len()
        )));
    }
    if k == 0 || k > m.min(n) {
        return Err(Error::invalid(format!("sparsity {k} must lie in 1..={}", m.min(n))));
    }
    if let Some(j) = (0..n).find(|&j| norm(a.col(j)) == 0.0) {
        return Err(Error::invalid(format!("dictionary atom {j} is zero")));
    }

    let y_norm = norm(y);
    let stop = ZERO_RESIDUAL_TOL * y_norm;
    let mut residual = y.to_vec();
    let mut selected = vec![false; n];
    let mut support = Vec::with_capacity(k);
    let mut coeffs = Vec::new();
    let mut residual_norms = vec![y_norm];
    let mut exhausted = false;

    while support.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for j in (0..n).filter(|&j| !selected[j]) {
            let c = dot(a.col(j), &residual).abs();
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((j, c));
            }
        }
        let (atom, corr) = best.expect("k <= n leaves a candidate");
        if corr <= stop {
            exhausted = true;
            break;
        }
        selected[atom] = true;
        support.push(atom);
        let sub = a.select_columns(&support)?;
        coeffs = least_squares(&sub, y)?;
        residual.copy_from_slice(y);
        for (&j, &c) in support.iter().zip(&coeffs) {
            axpy(-c, a.col(j), &mut residual);
        }
        residual_norms.push(norm(&residual));
    }

    Ok(OmpOutcome {
        support,
        coeffs,
        residual_norms,
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_basis() {
        let a = DenseMatrix::identity(3).unwrap();
        let out = omp(&[0.0, 5.0, 0.0], &a, 1).unwrap();
        assert_eq!(out.support, vec![1]);
        assert_eq!(out.coeffs, vec![5.0]);
        assert!(!out.exhausted);
    }

    #[test]
    fn orthonormal_exact_recovery() {
        let h = 0.5f64.sqrt();
        let a = DenseMatrix::from_columns(&[vec![h, h, 0.0], vec![h, -h, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let y: Vec<f64> = (0..3).map(|i| 2.0 * a.get(i, 0) + 3.0 * a.get(i, 1)).collect();
        let out = omp(&y, &a, 2).unwrap();
        assert_eq!(out.sorted_pairs().iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 1]);
        let pairs = out.sorted_pairs();
        assert!((pairs[0].1 - 2.0).abs() < 1e-12);
        assert!((pairs[1].1 - 3.0).abs() < 1e-12);
        assert!(*out.residual_norms.last().unwrap() < 1e-12);
    }

    #[test]
    fn early_exit_when_residual_vanishes() {
        let a = DenseMatrix::identity(3).unwrap();
        let out = omp(&[0.0, 5.0, 0.0], &a, 3).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.support, vec![1]);

        let out = omp(&[0.0; 3], &a, 2).unwrap();
        assert!(out.exhausted);
        assert!(out.support.is_empty());
    }

    #[test]
    fn ties_pick_lowest_index() {
        let a = DenseMatrix::identity(3).unwrap();
        let out = omp(&[1.0, -1.0, 1.0], &a, 1).unwrap();
        assert_eq!(out.support, vec![0]);
    }

    #[test]
    fn precondition_errors() {
        let a = DenseMatrix::identity(3).unwrap();
        assert!(omp(&[1.0, 0.0, 0.0], &a, 0).is_err());
        assert!(omp(&[1.0, 0.0, 0.0], &a, 4).is_err());
        assert!(omp(&[1.0, 0.0], &a, 1).is_err());
        let z = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap();
        assert!(omp(&[1.0, 0.0], &z, 1).is_err());
    }
}
