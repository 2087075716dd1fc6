use log::debug;

use super::block::block_omp;
use super::dictionary::{dead_atoms, fit_dictionary, normalize_atoms, reseed_atoms};
use crate::error::{Error, Result};
use crate::linalg::{objective, DenseMatrix};
use crate::sparse::SparseCoeff;
use crate::trace::{ObjectiveTrace, Phase};

#[derive(Debug, Clone)]
pub struct InitOutcome {
    /// Unit-norm dictionary.
    pub dictionary: DenseMatrix,
    pub coeffs: SparseCoeff,
    /// Objective after every block-OMP pass and every dictionary update.
    /// Not monotone in general.
    pub trace: ObjectiveTrace,
    /// Atoms re-seeded because their coefficient row came back empty.
    pub reseeded: Vec<usize>,
    /// Set when the final block-OMP pass ran out of residual before the budget.
    pub exhausted: bool,
}

/// Warm start by alternating `iters` times between a batch pursuit with total
/// budget `budget` and a least-squares dictionary fit.
///
/// After each fit the atoms are rescaled to unit norm (coefficients
/// compensate), and atoms left without coefficients are re-seeded from the
/// worst-represented samples so the next pursuit can use them.
pub fn dict_approx_init(y: &DenseMatrix, a0: &DenseMatrix, budget: usize, iters: usize) -> Result<InitOutcome> {
    if iters == 0 {
        return Err(Error::invalid("initialization needs at least one iteration"));
    }
    if a0.rows() != y.rows() {
        return Err(Error::invalid(format!(
            "dictionary has {} rows, samples have {}",
            a0.rows(),
            y.rows()
        )));
    }
    let mut a = a0.clone();
    let mut trace = ObjectiveTrace::new();
    let mut reseeded = Vec::new();
    let mut x = SparseCoeff::new(a.cols(), y.cols())?;
    let mut exhausted = false;
    for t in 0..iters {
        let coded = block_omp(y, &a, budget)?;
        x = coded.coeffs;
        exhausted = coded.exhausted;
        trace.push(Phase::Coding, objective(y, &a, &x)?)?;

        a = fit_dictionary(y, &x, &a)?;
        let mut stale = normalize_atoms(&mut a, &mut x);
        trace.push(Phase::Dictionary, objective(y, &a, &x)?)?;

        for i in dead_atoms(&x) {
            if !stale.contains(&i) {
                stale.push(i);
            }
        }
        stale.sort_unstable();
        if !stale.is_empty() {
            debug!("init iteration {t}: re-seeding atoms {stale:?}");
            reseed_atoms(y, &mut a, &mut x, &stale)?;
            reseeded.extend_from_slice(&stale);
        }
    }
    reseeded.sort_unstable();
    reseeded.dedup();
    Ok(InitOutcome {
        dictionary: a,
        coeffs: x,
        trace,
        reseeded,
        exhausted,
    })
}
