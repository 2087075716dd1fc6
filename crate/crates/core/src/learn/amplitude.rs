use log::debug;

use crate::coding::fit_dictionary;
use crate::error::{Error, Result};
use crate::linalg::{axpy, check_shapes, dot, least_squares, objective, DenseMatrix};
use crate::sparse::SparseCoeff;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeReport {
    /// Objective at the start and after each of the `2·iters` half-steps.
    pub objectives: Vec<f64>,
    /// Dictionary updates or per-column refits discarded because they did not
    /// lower the objective in floating point (or could not be solved).
    pub rejected: usize,
}

fn column_error(y: &[f64], a: &DenseMatrix, entries: &[(usize, f64)]) -> f64 {
    let mut r = y.to_vec();
    for &(i, v) in entries {
        axpy(-v, a.col(i), &mut r);
    }
    dot(&r, &r)
}

/// Alternating least squares on the amplitudes with the support of `x`
/// frozen.
///
/// Each of the `iters` rounds refits the dictionary, `A = Y Xᵀ (X Xᵀ)⁻¹` over
/// the atoms in use, then every column `x_j(Ω_j) = argmin ‖y_j − A_{Ω_j} x‖`.
/// Structural positions of `x` never change.
pub fn amplitude_adjust(
    y: &DenseMatrix,
    a: &mut DenseMatrix,
    x: &mut SparseCoeff,
    iters: usize,
) -> Result<AmplitudeReport> {
    check_shapes(y, a, x)?;
    let mut current = objective(y, a, x)?;
    let mut report = AmplitudeReport {
        objectives: vec![current],
        rejected: 0,
    };

    for _ in 0..iters {
        match fit_dictionary(y, x, a) {
            Ok(cand) => {
                let value = objective(y, &cand, x)?;
                if value <= current {
                    *a = cand;
                    current = value;
                } else {
                    report.rejected += 1;
                }
            }
            Err(Error::Numerical { message, condition }) => {
                debug!("dictionary refit skipped: {message} ({condition:e})");
                report.rejected += 1;
            }
            Err(e) => return Err(e),
        }
        report.objectives.push(current);

        for j in 0..x.p() {
            let entries: Vec<(usize, f64)> = x.col_entries(j).collect();
            if entries.is_empty() {
                continue;
            }
            let support: Vec<usize> = entries.iter().map(|e| e.0).collect();
            let yj = y.col(j);
            let coeffs = match least_squares(&a.select_columns(&support)?, yj) {
                Ok(c) => c,
                Err(Error::Numerical { message, .. }) => {
                    debug!("column {j} refit skipped: {message}");
                    report.rejected += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let fresh: Vec<(usize, f64)> = support.iter().copied().zip(coeffs).collect();
            if column_error(yj, a, &fresh) <= column_error(yj, a, &entries) {
                for (i, v) in fresh {
                    x.set_value(i, j, v)?;
                }
            } else {
                report.rejected += 1;
            }
        }
        current = objective(y, a, x)?;
        report.objectives.push(current);
    }
    Ok(report)
}
