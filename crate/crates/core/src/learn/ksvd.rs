use log::debug;

use crate::coding::{omp_batch, reseed_atoms};
use crate::error::{Error, Result};
use crate::linalg::{axpy, objective, rank1_svd_default, DenseMatrix};
use crate::sparse::{SparseCoeff, SparseRow};
use crate::trace::{ObjectiveTrace, Phase};

#[derive(Debug, Clone)]
pub struct KsvdOutcome {
    pub dictionary: DenseMatrix,
    pub coeffs: SparseCoeff,
    /// Objective after every coding pass and every dictionary sweep. Not
    /// monotone in general.
    pub trace: ObjectiveTrace,
    pub reseeded: Vec<usize>,
}

/// K-SVD with a per-sample sparsity of `k`.
///
/// Every iteration codes each sample with OMP, then updates the atoms one at
/// a time: the columns that use atom `i` are refit by the leading singular
/// pair of their residual with atom `i` put back. Unused atoms are re-seeded
/// from the worst-represented samples.
pub fn ksvd(y: &DenseMatrix, a0: &DenseMatrix, k: usize, iters: usize) -> Result<KsvdOutcome> {
    let (m, n) = a0.shape();
    if y.rows() != m {
        return Err(Error::invalid(format!(
            "dictionary has {m} rows, samples have {}",
            y.rows()
        )));
    }
    if k == 0 || k > m.min(n) {
        return Err(Error::invalid(format!(
            "per-sample sparsity {k} must lie in 1..={}",
            m.min(n)
        )));
    }
    if iters == 0 {
        return Err(Error::invalid("K-SVD needs at least one iteration"));
    }

    let mut a = a0.clone();
    let mut trace = ObjectiveTrace::new();
    let mut reseeded = Vec::new();
    let mut x = SparseCoeff::new(n, y.cols())?;
    for it in 0..iters {
        x = omp_batch(y, &a, k)?;
        trace.push(Phase::Coding, objective(y, &a, &x)?)?;

        let mut dead = Vec::new();
        for i in 0..n {
            let users: Vec<usize> = x.row_support(i).collect();
            if users.is_empty() {
                dead.push(i);
                continue;
            }
            let mut cols = Vec::with_capacity(users.len());
            for &j in &users {
                let mut e = y.col(j).to_vec();
                for (l, v) in x.col_entries(j) {
                    if l != i {
                        axpy(-v, a.col(l), &mut e);
                    }
                }
                cols.push(e);
            }
            let err = DenseMatrix::from_columns(&cols)?;
            if err.frobenius_sq() == 0.0 {
                continue;
            }
            let t = rank1_svd_default(&err)?;
            a.col_mut(i).copy_from_slice(&t.u);
            let values = t.v.iter().map(|v| t.sigma * v).collect();
            x.replace_row(i, &SparseRow::new(users, values)?)?;
        }
        if !dead.is_empty() {
            debug!("K-SVD iteration {it}: re-seeding atoms {dead:?}");
            reseed_atoms(y, &mut a, &mut x, &dead)?;
            reseeded.extend_from_slice(&dead);
        }
        trace.push(Phase::Dictionary, objective(y, &a, &x)?)?;
    }
    reseeded.sort_unstable();
    reseeded.dedup();
    Ok(KsvdOutcome {
        dictionary: a,
        coeffs: x,
        trace,
        reseeded,
    })
}
