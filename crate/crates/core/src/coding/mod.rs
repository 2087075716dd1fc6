//! Greedy sparse coding: per-sample OMP, the batch-level block OMP and the
//! alternating warm start built on it.

mod block;
mod dictionary;
mod init;
mod omp;

pub use block::{block_omp, BlockOmpOutcome, INCREMENTAL_REFIT_ABOVE};
pub use dictionary::{
    dead_atoms, fit_dictionary, gaussian_dictionary, initial_dictionary, normalize_atoms, reseed_atoms,
};
pub use init::{dict_approx_init, InitOutcome};
pub use omp::{omp, OmpOutcome, ZERO_RESIDUAL_TOL};

use crate::error::Result;
use crate::linalg::DenseMatrix;
use crate::sparse::SparseCoeff;

/// Codes every column of `y` independently with [`omp`] at sparsity `k`.
pub fn omp_batch(y: &DenseMatrix, a: &DenseMatrix, k: usize) -> Result<SparseCoeff> {
    let mut x = SparseCoeff::new(a.cols(), y.cols())?;
    for j in 0..y.cols() {
        let out = omp(y.col(j), a, k)?;
        for (i, v) in out.sorted_pairs() {
            x.insert(i, j, v)?;
        }
    }
    Ok(x)
}
