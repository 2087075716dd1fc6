use std::collections::BTreeSet;

use super::inner::RowWorkspace;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, DenseMatrix};
use crate::sparse::SparseRow;

const UNIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct InterRowReport {
    /// Joint objective `‖Ỹ − a_i x^i − a_j x^j‖²_F` before the switch.
    pub before: f64,
    /// Joint objective after the switch (equal to `before` if rejected).
    pub after: f64,
    /// Size of the symmetric difference of the two supports.
    pub unique_columns: usize,
    /// Whether the new supports were kept.
    pub accepted: bool,
}

fn joint_objective(residual: &DenseMatrix, first: &RowWorkspace, second: &RowWorkspace) -> f64 {
    let m = residual.rows();
    let mut total = 0.0;
    let mut col = vec![0.0; m];
    for j in 0..residual.cols() {
        col.copy_from_slice(residual.col(j));
        for ws in [first, second] {
            if let Some(v) = ws.row.get(j) {
                for (c, a) in col.iter_mut().zip(&ws.atom) {
                    *c -= v * a;
                }
            }
        }
        total += dot(&col, &col);
    }
    total
}

/// Trades nonzeros between two rows while keeping their combined count.
///
/// `residual` is `Ỹ = Y − Σ_{l∉{i,j}} a_l x^l`. Columns where both rows are
/// nonzero keep their entries. Every other column offers one candidate: the
/// row whose projection `aᵀỹ_c` is larger in magnitude (the first row on
/// ties). The `|Ω|` strongest candidates, `Ω` being the symmetric difference
/// of the two supports, become the new unique entries with their projections
/// as values; ties in the ranking go to the lower column. A result that
/// would raise the joint objective in floating point is discarded.
///
/// Both atoms must have unit norm, which is what makes the projection
/// ranking optimal.
pub fn inter_row_switch(
    residual: &DenseMatrix,
    first: &mut RowWorkspace,
    second: &mut RowWorkspace,
) -> Result<InterRowReport> {
    let (m, p) = residual.shape();
    for ws in [&*first, &*second] {
        if ws.atom.len() != m {
            return Err(Error::invalid("atom length does not match residual rows"));
        }
        if ws.row.support().last().is_some_and(|&c| c >= p) {
            return Err(Error::invalid(format!("row {} has columns beyond {p}", ws.row_index)));
        }
        if (norm(&ws.atom) - 1.0).abs() > UNIT_TOL {
            return Err(Error::invalid(format!("atom {} is not unit norm", ws.row_index)));
        }
    }

    let si: BTreeSet<usize> = first.row.support().iter().copied().collect();
    let sj: BTreeSet<usize> = second.row.support().iter().copied().collect();
    let unique = si.symmetric_difference(&sj).count();
    let before = joint_objective(residual, first, second);
    if unique == 0 {
        return Ok(InterRowReport {
            before,
            after: before,
            unique_columns: 0,
            accepted: true,
        });
    }

    // (|value|, column, goes_to_first, value)
    let mut candidates: Vec<(f64, usize, bool, f64)> = Vec::with_capacity(p);
    for c in (0..p).filter(|c| !(si.contains(c) && sj.contains(c))) {
        let yc = residual.col(c);
        let mi = dot(&first.atom, yc);
        let mj = dot(&second.atom, yc);
        if mi.abs() >= mj.abs() {
            candidates.push((mi.abs(), c, true, mi));
        } else {
            candidates.push((mj.abs(), c, false, mj));
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut new_first: Vec<(usize, f64)> = Vec::new();
    let mut new_second: Vec<(usize, f64)> = Vec::new();
    for c in si.intersection(&sj) {
        new_first.push((*c, first.row.get(*c).expect("shared column")));
        new_second.push((*c, second.row.get(*c).expect("shared column")));
    }
    for &(_, c, to_first, v) in candidates.iter().take(unique) {
        if to_first {
            new_first.push((c, v));
        } else {
            new_second.push((c, v));
        }
    }
    let cand_first = RowWorkspace {
        row: SparseRow::from_pairs(new_first)?,
        ..first.clone()
    };
    let cand_second = RowWorkspace {
        row: SparseRow::from_pairs(new_second)?,
        ..second.clone()
    };
    debug_assert_eq!(
        cand_first.row.len() + cand_second.row.len(),
        first.row.len() + second.row.len()
    );

    let after = joint_objective(residual, &cand_first, &cand_second);
    if after <= before {
        *first = cand_first;
        *second = cand_second;
        Ok(InterRowReport {
            before,
            after,
            unique_columns: unique,
            accepted: true,
        })
    } else {
        Ok(InterRowReport {
            before,
            after: before,
            unique_columns: unique,
            accepted: false,
        })
    }
}
