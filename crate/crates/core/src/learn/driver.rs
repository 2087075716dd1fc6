use log::{debug, info};
use rand::seq::index;

use super::amplitude::amplitude_adjust;
use super::config::LearnConfig;
use super::inner::{inner_row_switch, RowWorkspace};
use super::inter::inter_row_switch;
use crate::coding::{normalize_atoms, reseed_atoms};
use crate::error::{Error, Result};
use crate::linalg::{axpy, check_shapes, residual, DenseMatrix};
use crate::seeded_rng;
use crate::sparse::SparseCoeff;
use crate::trace::{ObjectiveTrace, Phase};

#[derive(Debug, Clone)]
pub struct BatchSvdOutcome {
    /// Unit-norm dictionary.
    pub dictionary: DenseMatrix,
    pub coeffs: SparseCoeff,
    pub trace: ObjectiveTrace,
    pub outer_iterations: usize,
    /// The decrement rule fired before `max_outer` was reached.
    pub converged: bool,
    /// Outer iterations in which the inter-row phase ran.
    pub inter_phases: usize,
    /// Atoms re-seeded because their norm vanished.
    pub reseeded: Vec<usize>,
}

/// Adds (`sign = 1`) or removes (`sign = -1`) `a_i x^i` to or from `r`.
fn apply_row(r: &mut DenseMatrix, a: &DenseMatrix, x: &SparseCoeff, i: usize, sign: f64) {
    for (j, v) in x.row_entries(i) {
        if v != 0.0 {
            axpy(sign * v, a.col(i), r.col_mut(j));
        }
    }
}

fn workspace(a: &DenseMatrix, x: &SparseCoeff, i: usize) -> RowWorkspace {
    RowWorkspace {
        row_index: i,
        atom: a.col(i).to_vec(),
        row: x.row(i),
    }
}

fn store(a: &mut DenseMatrix, x: &mut SparseCoeff, ws: &RowWorkspace) -> Result<()> {
    a.col_mut(ws.row_index).copy_from_slice(&ws.atom);
    x.replace_row(ws.row_index, &ws.row)
}

/// Maps `0..n(n−1)/2` onto the pairs `(i, j)`, `i < j`, in lexicographic order.
fn pair_at(mut k: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
        i += 1;
    }
}

fn rescale(y: &DenseMatrix, a: &mut DenseMatrix, x: &mut SparseCoeff, reseeded: &mut Vec<usize>) -> Result<()> {
    let vanished = normalize_atoms(a, x);
    if !vanished.is_empty() {
        reseed_atoms(y, a, x, &vanished)?;
        reseeded.extend_from_slice(&vanished);
    }
    Ok(())
}

fn push(trace: &mut ObjectiveTrace, phase: Phase, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite(format!(
            "objective became {value} in {} phase",
            phase.label()
        )));
    }
    trace.push(phase, value)
}

/// Batchwise monotone dictionary learning from a starting pair `(A, X)`.
///
/// Each outer iteration visits the nonempty rows in decreasing order of
/// `k^i` and runs [`inner_row_switch`] with `cfg.inner_sweeps` rounds,
/// rescales the atoms to unit norm, runs [`inter_row_switch`] over a seeded
/// sample of row pairs when the inner phase gained less than `cfg.trigger`,
/// and finishes with [`amplitude_adjust`]. The loop stops when an outer
/// iteration gains at most `cfg.epsilon` or after `cfg.max_outer`
/// iterations.
///
/// `‖X‖₀` must equal `cfg.budget` on entry and is preserved exactly. The
/// residual `Y − AX` is maintained with rank-one updates during a sweep and
/// recomputed from scratch at the start of every outer iteration.
pub fn batch_svd(y: &DenseMatrix, a: &DenseMatrix, x: &SparseCoeff, cfg: &LearnConfig) -> Result<BatchSvdOutcome> {
    check_shapes(y, a, x)?;
    let (n, p) = (x.n(), x.p());
    cfg.validate(n, p)?;
    if x.nnz() != cfg.budget {
        return Err(Error::invalid(format!(
            "coefficients hold {} nonzeros but the budget is {}",
            x.nnz(),
            cfg.budget
        )));
    }
    let budget = cfg.budget;
    let mut a = a.clone();
    let mut x = x.clone();
    let mut rng = seeded_rng(cfg.seed);
    let mut trace = ObjectiveTrace::new();
    let mut reseeded = Vec::new();
    let mut converged = false;
    let mut inter_phases = 0;
    let mut outer = 0;

    rescale(y, &mut a, &mut x, &mut reseeded)?;

    while outer < cfg.max_outer {
        outer += 1;
        let mut r = residual(y, &a, &x)?;
        let start = r.frobenius_sq();
        push(&mut trace, Phase::Outer, start)?;

        let mut order: Vec<usize> = (0..n).filter(|&i| x.row_len(i) > 0).collect();
        order.sort_by(|&i, &j| x.row_len(j).cmp(&x.row_len(i)).then(i.cmp(&j)));
        let mut inner_end = start;
        for &i in &order {
            apply_row(&mut r, &a, &x, i, 1.0);
            let mut ws = workspace(&a, &x, i);
            let rep = inner_row_switch(&r, &mut ws, cfg.inner_sweeps)?;
            store(&mut a, &mut x, &ws)?;
            apply_row(&mut r, &a, &x, i, -1.0);
            inner_end = *rep.local_objectives.last().expect("nonempty");
            push(&mut trace, Phase::Inner, inner_end)?;
        }

        rescale(y, &mut a, &mut x, &mut reseeded)?;

        if start - inner_end < cfg.trigger && n >= 2 {
            inter_phases += 1;
            let total = n * (n - 1) / 2;
            let picks = index::sample(&mut rng, total, cfg.pair_count(n));
            debug!("outer {outer}: inter-row phase over {} pairs", picks.len());
            for k in picks.iter() {
                let (i, j) = pair_at(k, n);
                if x.row_len(i) == 0 && x.row_len(j) == 0 {
                    continue;
                }
                apply_row(&mut r, &a, &x, i, 1.0);
                apply_row(&mut r, &a, &x, j, 1.0);
                let mut wi = workspace(&a, &x, i);
                let mut wj = workspace(&a, &x, j);
                let rep = inter_row_switch(&r, &mut wi, &mut wj)?;
                store(&mut a, &mut x, &wi)?;
                store(&mut a, &mut x, &wj)?;
                apply_row(&mut r, &a, &x, i, -1.0);
                apply_row(&mut r, &a, &x, j, -1.0);
                push(&mut trace, Phase::Inter, rep.after)?;
            }
        }

        let rep = amplitude_adjust(y, &mut a, &mut x, cfg.amplitude_iters)?;
        for &v in &rep.objectives[1..] {
            push(&mut trace, Phase::Amplitude, v)?;
        }
        let end = *rep.objectives.last().expect("nonempty");

        if x.nnz() != budget {
            return Err(Error::Invariant(format!(
                "nonzero count drifted from {budget} to {} in outer iteration {outer}",
                x.nnz()
            )));
        }
        debug!("outer {outer}: objective {start:.6e} -> {end:.6e}");
        if start - end <= cfg.epsilon {
            converged = true;
            break;
        }
    }

    rescale(y, &mut a, &mut x, &mut reseeded)?;
    reseeded.sort_unstable();
    reseeded.dedup();
    info!(
        "batch_svd finished after {outer} outer iterations (converged: {converged}), objective {:.6e}",
        trace.last_value().unwrap_or(0.0)
    );
    Ok(BatchSvdOutcome {
        dictionary: a,
        coeffs: x,
        trace,
        outer_iterations: outer,
        converged,
        inter_phases,
        reseeded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_enumeration_is_lexicographic() {
        let pairs: Vec<_> = (0..6).map(|k| pair_at(k, 4)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn exact_factorization_stops_after_one_pass() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let x = SparseCoeff::from_triplets(2, 3, [(0, 0, 2.0), (1, 1, -1.0), (0, 2, 0.5)]).unwrap();
        let y = a.matmul(&x.to_dense()).unwrap();
        let mut cfg = LearnConfig::with_budget(3);
        cfg.epsilon = 0.0;
        let out = batch_svd(&y, &a, &x, &cfg).unwrap();
        assert!(out.converged);
        assert_eq!(out.outer_iterations, 1);
        assert!(out.trace.last_value().unwrap() < 1e-20);
        assert_eq!(out.coeffs.nnz(), 3);
    }

    #[test]
    fn budget_mismatch_is_rejected() {
        let a = DenseMatrix::identity(2).unwrap();
        let x = SparseCoeff::from_triplets(2, 2, [(0, 0, 1.0)]).unwrap();
        let y = DenseMatrix::identity(2).unwrap();
        let cfg = LearnConfig::with_budget(2);
        assert!(batch_svd(&y, &a, &x, &cfg).is_err());
    }
}
