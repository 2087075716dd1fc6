use super::omp::ZERO_RESIDUAL_TOL;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, least_squares, norm, Cholesky, DenseMatrix};
use crate::sparse::SparseCoeff;

/// Supports larger than this are refit through an incrementally grown
/// Cholesky factor instead of a fresh solve.
pub const INCREMENTAL_REFIT_ABOVE: usize = 8;

#[derive(Debug, Clone)]
pub struct BlockOmpOutcome {
    pub coeffs: SparseCoeff,
    /// `(atom, sample)` pairs in the order they were selected.
    pub selections: Vec<(usize, usize)>,
    /// Set when every residual vanished before the budget was spent.
    pub exhausted: bool,
}

struct SampleState {
    support: Vec<usize>,
    coeffs: Vec<f64>,
    residual: Vec<f64>,
    // |aᵢᵀ r| of unselected atoms; selected atoms hold -1
    corr: Vec<f64>,
    best: (f64, usize),
    chol: Option<Cholesky>,
}

impl SampleState {
    fn refresh_correlations(&mut self, a: &DenseMatrix, selected_mask: impl Fn(usize) -> bool) {
        let mut best = (-1.0, 0);
        for i in 0..a.cols() {
            let c = if selected_mask(i) {
                -1.0
            } else {
                dot(a.col(i), &self.residual).abs()
            };
            self.corr[i] = c;
            if c > best.0 {
                best = (c, i);
            }
        }
        self.best = best;
    }
}

/// Greedy pursuit of the whole batch under one total budget.
///
/// Equivalent to OMP on `vec(Y)` with the dictionary `I_p ⊗ A`, without
/// forming the Kronecker product: each step takes the unselected
/// `(atom, sample)` pair with the largest `|aᵢᵀ r_j|`, ties going to the
/// smaller sample index and then the smaller atom index, and refits only that
/// sample by least squares. Stops after `budget` selections or once every
/// correlation is below `ZERO_RESIDUAL_TOL·‖Y‖_F`.
pub fn block_omp(y: &DenseMatrix, a: &DenseMatrix, budget: usize) -> Result<BlockOmpOutcome> {
    let (m, p) = y.shape();
    let n = a.cols();
    if a.rows() != m {
        return Err(Error::invalid(format!(
            "dictionary has {} rows, samples have {m}",
            a.rows()
        )));
    }
    if budget == 0 || budget > n * p {
        return Err(Error::invalid(format!("budget {budget} must lie in 1..={}", n * p)));
    }
    if let Some(j) = (0..n).find(|&j| norm(a.col(j)) == 0.0) {
        return Err(Error::invalid(format!("dictionary atom {j} is zero")));
    }

    let stop = ZERO_RESIDUAL_TOL * y.frobenius();
    let mut states: Vec<SampleState> = (0..p)
        .map(|j| {
            let mut s = SampleState {
                support: Vec::new(),
                coeffs: Vec::new(),
                residual: y.col(j).to_vec(),
                corr: vec![0.0; n],
                best: (-1.0, 0),
                chol: None,
            };
            s.refresh_correlations(a, |_| false);
            s
        })
        .collect();

    let mut selections = Vec::with_capacity(budget);
    let mut exhausted = false;
    while selections.len() < budget {
        let mut pick: Option<(f64, usize, usize)> = None;
        for (j, s) in states.iter().enumerate() {
            if pick.is_none_or(|(v, _, _)| s.best.0 > v) {
                pick = Some((s.best.0, s.best.1, j));
            }
        }
        let (corr, atom, sample) = pick.expect("p >= 1");
        if corr <= stop {
            exhausted = true;
            break;
        }
        selections.push((atom, sample));
        refit_sample(&mut states[sample], y.col(sample), a, atom)?;
        let st = &mut states[sample];
        let support = st.support.clone();
        st.refresh_correlations(a, |i| support.contains(&i));
    }

    let mut coeffs = SparseCoeff::new(n, p)?;
    for (j, s) in states.iter().enumerate() {
        for (&i, &v) in s.support.iter().zip(&s.coeffs) {
            coeffs.insert(i, j, v)?;
        }
    }
    Ok(BlockOmpOutcome {
        coeffs,
        selections,
        exhausted,
    })
}

fn refit_sample(st: &mut SampleState, y: &[f64], a: &DenseMatrix, atom: usize) -> Result<()> {
    st.support.push(atom);
    let k = st.support.len();
    let mut solved = false;
    if k > INCREMENTAL_REFIT_ABOVE {
        if st.chol.is_none() {
            let prev = &st.support[..k - 1];
            st.chol = Cholesky::factor(&a.select_columns(prev)?.gram());
        }
        if let Some(chol) = st.chol.as_mut() {
            let cross: Vec<f64> = st.support[..k - 1]
                .iter()
                .map(|&i| dot(a.col(i), a.col(atom)))
                .collect();
            if chol.push(&cross, dot(a.col(atom), a.col(atom)))
                && chol.condition_estimate() <= crate::linalg::CONDITION_LIMIT
            {
                let mut rhs: Vec<f64> = st.support.iter().map(|&i| dot(a.col(i), y)).collect();
                chol.solve_in_place(&mut rhs);
                st.coeffs = rhs;
                solved = true;
            } else {
                st.chol = None;
            }
        }
    }
    if !solved {
        st.coeffs = least_squares(&a.select_columns(&st.support)?, y)?;
    }
    st.residual.copy_from_slice(y);
    for (&i, &c) in st.support.iter().zip(&st.coeffs) {
        axpy(-c, a.col(i), &mut st.residual);
    }
    Ok(())
}
