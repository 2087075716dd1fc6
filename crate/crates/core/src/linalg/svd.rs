//! Leading singular triple of a small dense matrix.

use super::matrix::{dot, norm, DenseMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 500;

const MAX_SQUARINGS: usize = 64;

/// `(σ, u, v)` with `M v ≈ σ u`, `Mᵀ u ≈ σ v` and unit `u`, `v`.
///
/// The entry of `u` with the largest magnitude is non-negative, which fixes
/// the sign ambiguity of the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularTriple {
    pub sigma: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// `false` when `max_iter` polishing steps did not reach the tolerance;
    /// the triple is then the best iterate seen.
    pub converged: bool,
    /// `max(‖Mv − σu‖, ‖Mᵀu − σv‖)` of the returned triple.
    pub residual: f64,
}

/// Leading singular triple with the default tolerance and iteration cap.
pub fn rank1_svd_default(m: &DenseMatrix) -> Result<SingularTriple> {
    rank1_svd(m, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Leading singular triple of `m` by power iteration on its smaller Gram
/// matrix.
///
/// The start vector comes from repeatedly squaring the normalized Gram
/// matrix, which converges to (a multiple of) the projector onto the leading
/// eigenspace; its largest column is never orthogonal to that space. Power
/// steps then polish the vector until `max(‖Mv − σu‖, ‖Mᵀu − σv‖) ≤ tol·‖M‖_F`.
/// The result depends only on `m`.
pub fn rank1_svd(m: &DenseMatrix, tol: f64, max_iter: usize) -> Result<SingularTriple> {
    if !(tol > 0.0) {
        return Err(Error::invalid("rank1_svd tolerance must be positive"));
    }
    let fro = m.frobenius();
    if fro == 0.0 {
        return Err(Error::Degenerate("rank1_svd of an all-zero matrix".into()));
    }
    // Work with G = M Mᵀ when m is short and wide, otherwise with Mᵀ M.
    let left = m.rows() <= m.cols();
    let gram = if left { m.outer_gram() } else { m.gram() };
    let d = gram.rows();

    let mut z = leading_start(&gram);
    let target = tol * fro;
    let mut best: Option<SingularTriple> = None;
    for _ in 0..=max_iter {
        let trial = triple_from(m, &z, left)?;
        let done = trial.residual <= target;
        if best.as_ref().is_none_or(|b| trial.residual < b.residual) {
            best = Some(trial);
        }
        if done {
            break;
        }
        let mut w = gram.mul_vec(&z)?;
        let nw = norm(&w);
        if nw == 0.0 {
            break;
        }
        w.iter_mut().for_each(|x| *x /= nw);
        z = w;
    }
    let mut out = best.expect("at least one iterate");
    out.converged = out.residual <= target;
    debug_assert_eq!(out.u.len(), m.rows());
    debug_assert_eq!(z.len(), d);
    Ok(out)
}

/// Unit vector in the leading eigenspace of a symmetric PSD matrix, up to the
/// accuracy reachable by squaring.
fn leading_start(gram: &DenseMatrix) -> Vec<f64> {
    let d = gram.rows();
    let scale = gram.frobenius();
    let mut p = gram.clone();
    if scale > 0.0 {
        p = DenseMatrix::from_col_major(d, d, p.as_slice().iter().map(|v| v / scale).collect())
            .expect("scaled Gram is finite");
    }
    for _ in 0..MAX_SQUARINGS {
        let q = match p.matmul(&p) {
            Ok(q) => q,
            Err(_) => break,
        };
        let s = q.frobenius();
        if !(s > 0.0) || !s.is_finite() {
            break;
        }
        let q = DenseMatrix::from_col_major(d, d, q.as_slice().iter().map(|v| v / s).collect())
            .expect("normalized square is finite");
        let diff = q.sub(&p).map(|e| e.frobenius()).unwrap_or(0.0);
        p = q;
        if diff <= 1e-14 {
            break;
        }
    }
    let mut best_col = 0;
    let mut best_norm = -1.0;
    for j in 0..d {
        let nj = norm(p.col(j));
        if nj > best_norm {
            best_norm = nj;
            best_col = j;
        }
    }
    if best_norm > 0.0 {
        p.col(best_col).iter().map(|v| v / best_norm).collect()
    } else {
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        e
    }
}

fn triple_from(m: &DenseMatrix, z: &[f64], left: bool) -> Result<SingularTriple> {
    let (mut u, mut v, sigma) = if left {
        let t = m.tr_mul_vec(z)?;
        let s = norm(&t);
        let v = if s > 0.0 { t.iter().map(|x| x / s).collect() } else { t };
        (z.to_vec(), v, s)
    } else {
        let t = m.mul_vec(z)?;
        let s = norm(&t);
        let u = if s > 0.0 { t.iter().map(|x| x / s).collect() } else { t };
        (u, z.to_vec(), s)
    };
    if sigma == 0.0 {
        return Ok(SingularTriple {
            sigma,
            u,
            v,
            converged: false,
            residual: f64::INFINITY,
        });
    }
    // sign convention: largest |u_i| (first on ties) is positive
    let mut pivot = 0;
    for (i, x) in u.iter().enumerate() {
        if x.abs() > u[pivot].abs() {
            pivot = i;
        }
    }
    if u[pivot] < 0.0 {
        u.iter_mut().for_each(|x| *x = -*x);
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let mv = m.mul_vec(&v)?;
    let mtu = m.tr_mul_vec(&u)?;
    let r1: f64 = mv.iter().zip(&u).map(|(a, b)| (a - sigma * b).powi(2)).sum();
    let r2: f64 = mtu.iter().zip(&v).map(|(a, b)| (a - sigma * b).powi(2)).sum();
    let residual = r1.sqrt().max(r2.sqrt());
    debug_assert!((dot(&u, &u) - 1.0).abs() < 1e-10);
    Ok(SingularTriple {
        sigma,
        u,
        v,
        converged: false,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn exact_rank_one() {
        let m = DenseMatrix::from_rows(&[[2.0, 1.0], [0.0, 0.0]]).unwrap();
        let t = rank1_svd_default(&m).unwrap();
        assert!(t.converged);
        assert!((t.sigma - 5f64.sqrt()).abs() < 1e-12);
        assert!(close(&t.u, &[1.0, 0.0], 1e-12));
        let s = 5f64.sqrt();
        assert!(close(&t.v, &[2.0 / s, 1.0 / s], 1e-12));
    }

    #[test]
    fn diagonal() {
        let m = DenseMatrix::from_rows(&[[3.0, 0.0], [0.0, 1.0]]).unwrap();
        let t = rank1_svd_default(&m).unwrap();
        assert!((t.sigma - 3.0).abs() < 1e-12);
        assert!(close(&t.u, &[1.0, 0.0], 1e-12));
        assert!(close(&t.v, &[1.0, 0.0], 1e-12));
    }

    #[test]
    fn start_orthogonal_to_all_ones() {
        // Leading eigenvector (1, -1)/√2 is orthogonal to the all-ones vector.
        let m = DenseMatrix::from_rows(&[[2.0, -1.0], [-1.0, 2.0]]).unwrap();
        let t = rank1_svd_default(&m).unwrap();
        assert!((t.sigma - 3.0).abs() < 1e-12, "sigma {}", t.sigma);
        let h = 0.5f64.sqrt();
        assert!(close(&t.u, &[h, -h], 1e-12));
    }

    #[test]
    fn tall_matrix_uses_column_gram() {
        let m = DenseMatrix::from_rows(&[[1.0], [2.0], [2.0]]).unwrap();
        let t = rank1_svd_default(&m).unwrap();
        assert!((t.sigma - 3.0).abs() < 1e-12);
        assert!(close(&t.u, &[1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0], 1e-12));
        assert!(close(&t.v, &[1.0], 1e-12));
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        let m = DenseMatrix::zeros(2, 3).unwrap();
        assert!(matches!(rank1_svd_default(&m), Err(Error::Degenerate(_))));
        let m = DenseMatrix::identity(2).unwrap();
        assert!(rank1_svd(&m, 0.0, 10).is_err());
    }

    #[test]
    fn sign_is_fixed_by_largest_u_entry() {
        let m = DenseMatrix::from_rows(&[[-1.0, -2.0], [-0.1, -0.2]]).unwrap();
        let t = rank1_svd_default(&m).unwrap();
        assert!(t.u[0] > 0.0);
        assert!(t.v[1] < 0.0);
    }
}
