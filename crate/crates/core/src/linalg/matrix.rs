use std::fmt;

use crate::error::{Error, Result};

/// Dense real matrix stored column-major.
///
/// Every constructor rejects empty shapes and non-finite entries, so a value
/// of this type always holds `rows * cols` finite numbers.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Wraps column-major `data`.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!(
                "matrix shape {rows}x{cols} must be at least 1x1"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "entry ({}, {}) is {}",
                pos % rows,
                pos / rows,
                data[pos]
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices, which reads naturally in tests.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != ncols) {
            return Err(Error::invalid("ragged row lengths"));
        }
        let mut data = vec![0.0; nrows * ncols];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.as_ref().iter().enumerate() {
                data[j * nrows + i] = v;
            }
        }
        Self::from_col_major(nrows, ncols, data)
    }

    /// Builds a matrix from column slices.
    pub fn from_columns<C: AsRef<[f64]>>(cols: &[C]) -> Result<Self> {
        let ncols = cols.len();
        let nrows = cols.first().map(|c| c.as_ref().len()).unwrap_or(0);
        if cols.iter().any(|c| c.as_ref().len() != nrows) {
            return Err(Error::invalid("ragged column lengths"));
        }
        let data = cols.iter().flat_map(|c| c.as_ref().iter().copied()).collect();
        Self::from_col_major(nrows, ncols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_col_major(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        Ok(m)
    }

    /// Builds a matrix entry by entry from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self::from_col_major(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_col_major(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[col * self.rows + row]
    }

    /// Writes one entry. Callers keep the finiteness invariant.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.data[col * self.rows + row] = value;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        let m = self.rows;
        &mut self.data[j * m..(j + 1) * m]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// Copies the listed columns, in order, into a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for &j in cols {
            if j >= self.cols {
                return Err(Error::invalid(format!("column {j} out of range")));
            }
            data.extend_from_slice(self.col(j));
        }
        Self::from_col_major(self.rows, cols.len(), data)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = vec![0.0; self.rows * rhs.cols];
        for j in 0..rhs.cols {
            let dst = &mut out[j * self.rows..(j + 1) * self.rows];
            for (k, &b) in rhs.col(j).iter().enumerate() {
                if b != 0.0 {
                    axpy(b, self.col(k), dst);
                }
            }
        }
        Self::from_col_major(self.rows, rhs.cols, out)
    }

    /// `self * v` for a vector of length `cols`.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::invalid(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![0.0; self.rows];
        for (j, &b) in v.iter().enumerate() {
            if b != 0.0 {
                axpy(b, self.col(j), &mut out);
            }
        }
        Ok(out)
    }

    /// `selfᵀ * v` for a vector of length `rows`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::invalid(format!(
                "vector length {} does not match {} rows",
                v.len(),
                self.rows
            )));
        }
        Ok((0..self.cols).map(|j| dot(self.col(j), v)).collect())
    }

    /// `selfᵀ self`.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut data = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..=j {
                let g = dot(self.col(i), self.col(j));
                data[j * n + i] = g;
                data[i * n + j] = g;
            }
        }
        Self { rows: n, cols: n, data }
    }

    /// `self selfᵀ`.
    pub fn outer_gram(&self) -> Self {
        let m = self.rows;
        let mut data = vec![0.0; m * m];
        for j in 0..self.cols {
            let c = self.col(j);
            for b in 0..m {
                let cb = c[b];
                if cb == 0.0 {
                    continue;
                }
                for a in 0..m {
                    data[b * m + a] += c[a] * cb;
                }
            }
        }
        Self { rows: m, cols: m, data }
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::invalid("shape mismatch in subtraction"));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Self::from_col_major(self.rows, self.cols, data)
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    /// Euclidean norm of every column.
    pub fn column_norms(&self) -> Vec<f64> {
        (0..self.cols).map(|j| norm(self.col(j))).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:.6}", self.get(i, j))).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Squared distance `‖a − alpha·b‖²`.
#[inline]
pub fn dist_sq_scaled(a: &[f64], alpha: f64, b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - alpha * y;
            d * d
        })
        .sum()
}
