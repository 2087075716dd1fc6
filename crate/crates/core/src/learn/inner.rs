use crate::error::{Error, Result};
use crate::linalg::{dist_sq_scaled, dot, rank1_svd_default, DenseMatrix};
use crate::sparse::SparseRow;

/// One atom and its coefficient row, the state that row-level switching
/// updates.
#[derive(Debug, Clone, PartialEq)]
pub struct RowWorkspace {
    pub row_index: usize,
    pub atom: Vec<f64>,
    pub row: SparseRow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerRowReport {
    /// `‖Ỹ − a x‖²_F` at the start and after every half-step.
    pub local_objectives: Vec<f64>,
    /// `Ỹ` vanished on the support; the row was zeroed and left in place.
    pub degenerate: bool,
    /// Half-steps whose candidate did not lower the objective and was
    /// discarded.
    pub rejected: usize,
}

/// `‖Ỹ − a x‖²_F` for a row with the given support and values.
pub fn local_objective(residual: &DenseMatrix, atom: &[f64], row: &SparseRow) -> f64 {
    let mut in_support = vec![false; residual.cols()];
    let mut total = 0.0;
    for (j, v) in row.iter() {
        in_support[j] = true;
        total += dist_sq_scaled(residual.col(j), v, atom);
    }
    for (j, inside) in in_support.iter().enumerate() {
        if !inside {
            total += dot(residual.col(j), residual.col(j));
        }
    }
    total
}

/// For a fixed atom, the `k` columns with the largest `|aᵀỹ_j|` (lowest
/// index on ties) and their projections `aᵀỹ_j`.
///
/// With a unit atom this minimizes `‖Ỹ − a x‖²_F` over all rows with exactly
/// `k` nonzeros; the minimum is `‖Ỹ‖²_F − Σ (aᵀỹ_j)²` over the chosen
/// columns.
pub fn select_row_support(residual: &DenseMatrix, atom: &[f64], k: usize) -> Result<SparseRow> {
    let p = residual.cols();
    if k > p {
        return Err(Error::invalid(format!("row support {k} exceeds {p} columns")));
    }
    if atom.len() != residual.rows() {
        return Err(Error::invalid("atom length does not match residual rows"));
    }
    let proj: Vec<f64> = (0..p).map(|j| dot(atom, residual.col(j))).collect();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| proj[j].abs().total_cmp(&proj[i].abs()).then(i.cmp(&j)));
    let mut chosen: Vec<usize> = order[..k].to_vec();
    chosen.sort_unstable();
    let values = chosen.iter().map(|&j| proj[j]).collect();
    SparseRow::new(chosen, values)
}

/// Relocates the nonzeros of one row while keeping their count.
///
/// `residual` is `Ỹ = Y − Σ_{j≠i} a_j x^j`, the data left for this row to
/// explain. Each of the `sweeps` rounds fits the best rank-one `a x_Ω` on the
/// current support (atom from the leading singular vector of `Ỹ_Ω`), then
/// moves the support to the `k` columns with the largest `|aᵀỹ_j|` and sets
/// `x_Ω = aᵀỸ_Ω`. A half-step whose result would raise `‖Ỹ − a x‖²_F` in
/// floating point is discarded, so the recorded sequence never increases.
pub fn inner_row_switch(residual: &DenseMatrix, ws: &mut RowWorkspace, sweeps: usize) -> Result<InnerRowReport> {
    let k = ws.row.len();
    if k == 0 {
        return Err(Error::invalid(format!("row {} has an empty support", ws.row_index)));
    }
    if ws.atom.len() != residual.rows() {
        return Err(Error::invalid("atom length does not match residual rows"));
    }
    if ws.row.support().last().is_some_and(|&c| c >= residual.cols()) {
        return Err(Error::invalid("row support outside residual columns"));
    }
    if !residual.is_finite() {
        return Err(Error::NonFinite("inner-row residual".into()));
    }

    let mut current = local_objective(residual, &ws.atom, &ws.row);
    let mut report = InnerRowReport {
        local_objectives: vec![current],
        degenerate: false,
        rejected: 0,
    };

    for _ in 0..sweeps {
        // rank-one fit on the fixed support
        let sub = residual.select_columns(ws.row.support())?;
        if sub.frobenius_sq() == 0.0 {
            let zeros = vec![0.0; k];
            ws.row = SparseRow::new(ws.row.support().to_vec(), zeros)?;
            current = local_objective(residual, &ws.atom, &ws.row);
            report.local_objectives.push(current);
            report.degenerate = true;
            return Ok(report);
        }
        let triple = rank1_svd_default(&sub)?;
        let values = ws
            .row
            .support()
            .iter()
            .map(|&j| dot(&triple.u, residual.col(j)))
            .collect();
        let row = SparseRow::new(ws.row.support().to_vec(), values)?;
        let cand = local_objective(residual, &triple.u, &row);
        if cand <= current {
            ws.atom = triple.u;
            ws.row = row;
            current = cand;
        } else {
            report.rejected += 1;
        }
        report.local_objectives.push(current);

        // support reselection for the fixed atom
        let row = select_row_support(residual, &ws.atom, k)?;
        let cand = local_objective(residual, &ws.atom, &row);
        if cand <= current {
            ws.row = row;
            current = cand;
        } else {
            report.rejected += 1;
        }
        report.local_objectives.push(current);
    }
    Ok(report)
}
