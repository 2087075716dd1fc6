//! Dictionary construction and maintenance shared by all learners.

use log::debug;
use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{check_shapes, norm, residual, solve_gram_multi, DenseMatrix};
use crate::sparse::SparseCoeff;

/// Atoms whose norm falls to this level are treated as vanished.
const ATOM_FLOOR: f64 = 1e-300;

/// Gaussian `m × n` dictionary with unit-norm columns.
pub fn gaussian_dictionary<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<DenseMatrix> {
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        cols.push(gaussian_unit(m, rng));
    }
    DenseMatrix::from_columns(&cols)
}

fn gaussian_unit<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let nv = norm(&v);
        if nv > 0.0 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

/// Starting dictionary: `n` distinct sample columns drawn uniformly at random
/// and normalized. Zero samples, and the atoms left over when `p < n`, are
/// replaced by normalized Gaussian vectors.
pub fn initial_dictionary<R: Rng + ?Sized>(y: &DenseMatrix, n: usize, rng: &mut R) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::invalid("dictionary needs at least one atom"));
    }
    let (m, p) = y.shape();
    let picked = index::sample(rng, p, n.min(p)).into_vec();
    let mut cols = Vec::with_capacity(n);
    for j in picked {
        let c = y.col(j);
        let nc = norm(c);
        if nc > 0.0 {
            cols.push(c.iter().map(|v| v / nc).collect());
        } else {
            cols.push(gaussian_unit(m, rng));
        }
    }
    while cols.len() < n {
        cols.push(gaussian_unit(m, rng));
    }
    DenseMatrix::from_columns(&cols)
}

/// Least-squares dictionary `argmin_A ‖Y − A X‖²_F` over the atoms whose
/// coefficient row is nonempty; the other atoms are copied from `current`.
///
/// Solves `(X Xᵀ) Aᵀ = X Yᵀ` restricted to the active rows.
pub fn fit_dictionary(y: &DenseMatrix, x: &SparseCoeff, current: &DenseMatrix) -> Result<DenseMatrix> {
    check_shapes(y, current, x)?;
    let active: Vec<usize> = (0..x.n()).filter(|&i| x.row_len(i) > 0).collect();
    if active.is_empty() {
        return Ok(current.clone());
    }
    let mut slot = vec![usize::MAX; x.n()];
    for (k, &i) in active.iter().enumerate() {
        slot[i] = k;
    }
    let na = active.len();
    let m = y.rows();
    let mut gram = DenseMatrix::zeros(na, na)?;
    let mut rhs = DenseMatrix::zeros(na, m)?;
    for j in 0..x.p() {
        let entries: Vec<(usize, f64)> = x.col_entries(j).map(|(i, v)| (slot[i], v)).collect();
        for &(a, va) in &entries {
            for &(b, vb) in &entries {
                gram.set(a, b, gram.get(a, b) + va * vb);
            }
            let yj = y.col(j);
            for (r, &yr) in yj.iter().enumerate() {
                rhs.set(a, r, rhs.get(a, r) + va * yr);
            }
        }
    }
    let (sol, factor) = solve_gram_multi(&gram, &rhs)?;
    if factor.ridge > 0.0 {
        debug!("dictionary update regularized, ridge {:e}", factor.ridge);
    }
    let mut out = current.clone();
    for (k, &i) in active.iter().enumerate() {
        let col = out.col_mut(i);
        for (r, c) in col.iter_mut().enumerate() {
            *c = sol.get(k, r);
        }
    }
    Ok(out)
}

/// Scales every atom to unit norm and the matching coefficient row by the
/// inverse factor, leaving `A X` unchanged. Returns the atoms whose norm had
/// vanished; they are left untouched for the caller to re-seed.
pub fn normalize_atoms(a: &mut DenseMatrix, x: &mut SparseCoeff) -> Vec<usize> {
    let mut vanished = Vec::new();
    for i in 0..a.cols() {
        let s = norm(a.col(i));
        if s <= ATOM_FLOOR {
            vanished.push(i);
            continue;
        }
        a.col_mut(i).iter_mut().for_each(|v| *v /= s);
        x.scale_row(i, s);
    }
    vanished
}

/// Replaces each listed atom by a normalized sample column, taking samples in
/// decreasing order of current residual norm (lowest index on ties) and using
/// each sample at most once. The coefficient values of a re-seeded row are
/// set to zero so `A X` is unchanged; its structural support is kept.
pub fn reseed_atoms(y: &DenseMatrix, a: &mut DenseMatrix, x: &mut SparseCoeff, atoms: &[usize]) -> Result<()> {
    if atoms.is_empty() {
        return Ok(());
    }
    for &i in atoms {
        let cols: Vec<usize> = x.row_support(i).collect();
        for j in cols {
            x.set_value(i, j, 0.0)?;
        }
    }
    let errs = residual(y, a, x)?.column_norms();
    let mut order: Vec<usize> = (0..y.cols()).collect();
    order.sort_by(|&p, &q| errs[q].total_cmp(&errs[p]).then(p.cmp(&q)));
    let mut candidates = order.into_iter().filter(|&j| norm(y.col(j)) > 0.0);
    let m = a.rows();
    for (rank, &i) in atoms.iter().enumerate() {
        let col: Vec<f64> = match candidates.next() {
            Some(j) => {
                let yj = y.col(j);
                let s = norm(yj);
                debug!("re-seeding atom {i} from sample {j} (residual {:.3e})", errs[j]);
                yj.iter().map(|v| v / s).collect()
            }
            None => {
                let mut e = vec![0.0; m];
                e[rank % m] = 1.0;
                e
            }
        };
        a.col_mut(i).copy_from_slice(&col);
    }
    Ok(())
}

/// Atoms with an empty coefficient row.
pub fn dead_atoms(x: &SparseCoeff) -> Vec<usize> {
    (0..x.n()).filter(|&i| x.row_len(i) == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::objective;
    use crate::seeded_rng;

    #[test]
    fn initial_dictionary_draws_distinct_samples() {
        let y = DenseMatrix::from_fn(3, 5, |i, j| (i + 3 * j + 1) as f64).unwrap();
        let a = initial_dictionary(&y, 4, &mut seeded_rng(7)).unwrap();
        assert_eq!(a.shape(), (3, 4));
        for n in a.column_norms() {
            assert!((n - 1.0).abs() < 1e-12);
        }
        let a2 = initial_dictionary(&y, 4, &mut seeded_rng(7)).unwrap();
        assert_eq!(a, a2);
        // more atoms than samples: Gaussian filler
        let a3 = initial_dictionary(&y, 8, &mut seeded_rng(1)).unwrap();
        assert_eq!(a3.cols(), 8);
    }

    #[test]
    fn fitted_dictionary_is_optimal_for_fixed_coefficients() {
        let y = DenseMatrix::from_rows(&[[1.0, 2.0, 0.5], [0.0, 1.0, -1.0]]).unwrap();
        let x = SparseCoeff::from_triplets(3, 3, [(0, 0, 1.0), (0, 1, 1.0), (1, 1, 0.5), (1, 2, 2.0)]).unwrap();
        let a0 = DenseMatrix::from_rows(&[[1.0, 0.0, 0.3], [0.0, 1.0, 0.7]]).unwrap();
        let a = fit_dictionary(&y, &x, &a0).unwrap();
        // unused atom untouched
        assert_eq!(a.col(2), a0.col(2));
        // (Y − AX) Xᵀ = 0
        let r = y.sub(&a.matmul(&x.to_dense()).unwrap()).unwrap();
        let g = r.matmul(&x.to_dense().transpose()).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                assert!(g.get(i, k).abs() < 1e-12);
            }
        }
        assert!(objective(&y, &a, &x).unwrap() <= objective(&y, &a0, &x).unwrap());
    }

    #[test]
    fn normalization_preserves_product() {
        let mut a = DenseMatrix::from_rows(&[[2.0, 0.0], [0.0, 0.0]]).unwrap();
        let mut x = SparseCoeff::from_triplets(2, 1, [(0, 0, 1.5), (1, 0, 0.0)]).unwrap();
        let vanished = normalize_atoms(&mut a, &mut x);
        assert_eq!(vanished, vec![1]);
        assert_eq!(a.get(0, 0), 1.0);
        assert_eq!(x.get(0, 0), Some(3.0));
    }

    #[test]
    fn reseed_uses_worst_sample() {
        let y = DenseMatrix::from_rows(&[[1.0, 0.0, 3.0], [0.0, 2.0, 0.0]]).unwrap();
        let mut a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap();
        let mut x = SparseCoeff::from_triplets(2, 3, [(0, 2, 3.0)]).unwrap();
        reseed_atoms(&y, &mut a, &mut x, &[1]).unwrap();
        // sample 1 has residual 2, sample 0 has 1, sample 2 has 0
        assert_eq!(a.col(1), &[0.0, 1.0]);
        assert_eq!(dead_atoms(&x), vec![1]);
    }
}
