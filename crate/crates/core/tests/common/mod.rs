//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the solver kernels of the crate; only the plain
//! containers (`DenseMatrix`, `SparseCoeff`) are shared.

#![allow(dead_code)]

use batchsvd::{DenseMatrix, SparseCoeff};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal)).unwrap()
}

pub fn unit_columns(a: &DenseMatrix) -> DenseMatrix {
    let norms: Vec<f64> = (0..a.cols())
        .map(|j| a.col(j).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) / norms[j]).unwrap()
}

pub fn unit_gaussian<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix {
    unit_columns(&gaussian(rng, rows, cols))
}

pub fn unit_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// Random coefficients with exactly `nnz` positions drawn uniformly.
pub fn random_sparse<R: Rng>(rng: &mut R, n: usize, p: usize, nnz: usize) -> SparseCoeff {
    let mut cells: Vec<usize> = (0..n * p).collect();
    cells.shuffle(rng);
    let triplets = cells[..nnz]
        .iter()
        .map(|&c| (c % n, c / n, rng.sample::<f64, _>(StandardNormal)));
    SparseCoeff::from_triplets(n, p, triplets).unwrap()
}

/// `‖Y − A·X‖²_F` with X dense, by explicit triple loops.
pub fn brute_objective(y: &DenseMatrix, a: &DenseMatrix, x: &DenseMatrix) -> f64 {
    let mut total = 0.0;
    for j in 0..y.cols() {
        for i in 0..y.rows() {
            let mut s = y.get(i, j);
            for k in 0..a.cols() {
                s -= a.get(i, k) * x.get(k, j);
            }
            total += s * s;
        }
    }
    total
}

/// Least squares `argmin ‖A c − y‖` by Householder QR (full column rank).
pub fn qr_least_squares(a: &DenseMatrix, y: &[f64]) -> Vec<f64> {
    let (m, n) = a.shape();
    assert!(n <= m, "QR oracle needs a tall matrix");
    let mut r: Vec<Vec<f64>> = (0..n).map(|j| a.col(j).to_vec()).collect();
    let mut b = y.to_vec();
    for k in 0..n {
        let alpha = {
            let nrm = r[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if r[k][k] > 0.0 {
                -nrm
            } else {
                nrm
            }
        };
        let mut v: Vec<f64> = r[k][k..].to_vec();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for col in r.iter_mut().skip(k) {
            let s: f64 = v.iter().zip(&col[k..]).map(|(p, q)| p * q).sum::<f64>() * 2.0 / vv;
            for (c, vi) in col[k..].iter_mut().zip(&v) {
                *c -= s * vi;
            }
        }
        let s: f64 = v.iter().zip(&b[k..]).map(|(p, q)| p * q).sum::<f64>() * 2.0 / vv;
        for (c, vi) in b[k..].iter_mut().zip(&v) {
            *c -= s * vi;
        }
    }
    let mut c = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= r[j][i] * c[j];
        }
        c[i] = s / r[i][i];
    }
    c
}

/// Full SVD by one-sided Jacobi rotations: `(σ descending, U, V)` with the
/// singular vectors as columns.
pub fn jacobi_svd(m: &DenseMatrix) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    if m.rows() < m.cols() {
        let (s, u, v) = jacobi_svd(&m.transpose());
        return (s, v, u);
    }
    let (rows, cols) = m.shape();
    let mut w: Vec<Vec<f64>> = (0..cols).map(|j| m.col(j).to_vec()).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = w[p].iter().map(|x| x * x).sum();
                let beta: f64 = w[q].iter().map(|x| x * x).sum();
                let gamma: f64 = w[p].iter().zip(&w[q]).map(|(a, b)| a * b).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    let (lo, hi) = mat.split_at_mut(q);
                    for (a, b) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = c * x - s * y;
                        *b = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut idx: Vec<usize> = (0..cols).collect();
    let sig: Vec<f64> = w.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    idx.sort_by(|&a, &b| sig[b].total_cmp(&sig[a]));
    let s: Vec<f64> = idx.iter().map(|&i| sig[i]).collect();
    let u = idx
        .iter()
        .map(|&i| {
            if sig[i] > 0.0 {
                w[i].iter().map(|x| x / sig[i]).collect()
            } else {
                vec![0.0; rows]
            }
        })
        .collect();
    let vv = idx.iter().map(|&i| v[i].clone()).collect();
    (s, u, vv)
}

/// Textbook OMP with a fresh QR solve every step. Ties go to the lower index.
/// Returns the support in selection order and the final coefficients.
pub fn naive_omp(y: &[f64], a: &DenseMatrix, k: usize, stop: f64) -> (Vec<usize>, Vec<f64>) {
    let mut support: Vec<usize> = Vec::new();
    let mut coeffs = Vec::new();
    let mut r = y.to_vec();
    while support.len() < k {
        let mut best = (-1.0, 0);
        for j in 0..a.cols() {
            if support.contains(&j) {
                continue;
            }
            let c: f64 = a.col(j).iter().zip(&r).map(|(p, q)| p * q).sum::<f64>().abs();
            if c > best.0 {
                best = (c, j);
            }
        }
        if best.0 <= stop {
            break;
        }
        support.push(best.1);
        coeffs = qr_least_squares(&a.select_columns(&support).unwrap(), y);
        r = y.to_vec();
        for (&j, &c) in support.iter().zip(&coeffs) {
            for (ri, ai) in r.iter_mut().zip(a.col(j)) {
                *ri -= c * ai;
            }
        }
    }
    (support, coeffs)
}

/// The block-diagonal dictionary `I_p ⊗ A`.
pub fn kronecker_identity(p: usize, a: &DenseMatrix) -> DenseMatrix {
    let (m, n) = a.shape();
    DenseMatrix::from_fn(
        m * p,
        n * p,
        |r, c| {
            if r / m == c / n {
                a.get(r % m, c % n)
            } else {
                0.0
            }
        },
    )
    .unwrap()
}

/// All `k`-subsets of `0..p` in lexicographic order.
pub fn combinations(p: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, p: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..p {
            cur.push(i);
            go(i + 1, p, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, p, k, &mut Vec::new(), &mut out);
    out
}

/// Mean and population standard deviation in two passes.
pub fn two_pass_stats(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Samples from a planted unit-norm dictionary where the first half of the
/// columns use one atom and the second half five, plus white noise at the
/// given SNR. Returns `(Y, K)` with `K` the planted nonzero count.
pub fn planted_heterogeneous<R: Rng>(rng: &mut R, m: usize, n: usize, p: usize, snr_db: f64) -> (DenseMatrix, usize) {
    let a = unit_gaussian(rng, m, n);
    let mut x = DenseMatrix::zeros(n, p).unwrap();
    let mut budget = 0;
    let mut atoms: Vec<usize> = (0..n).collect();
    for j in 0..p {
        let k = if j < p / 2 { 1 } else { 5 };
        atoms.shuffle(rng);
        for &i in &atoms[..k] {
            let mag = 1.0 + rng.gen::<f64>();
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            x.set(i, j, sign * mag);
        }
        budget += k;
    }
    let clean = a.matmul(&x).unwrap();
    let signal = clean.frobenius_sq() / (m * p) as f64;
    let sigma = (signal / 10f64.powf(snr_db / 10.0)).sqrt();
    let y = DenseMatrix::from_fn(m, p, |i, j| {
        clean.get(i, j) + sigma * rng.sample::<f64, _>(StandardNormal)
    })
    .unwrap();
    (y, budget)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Distance between unit vectors up to a global sign.
pub fn sign_free_distance(a: &[f64], b: &[f64]) -> f64 {
    let plus: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let minus: f64 = a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum::<f64>().sqrt();
    plus.min(minus)
}
