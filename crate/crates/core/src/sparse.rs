//! Sparse coefficient matrix with row and column support views.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// One row of a coefficient matrix: sorted column indices and their values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseRow {
    support: Vec<usize>,
    values: Vec<f64>,
}

impl SparseRow {
    pub fn new(support: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::invalid("support and values differ in length"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("row support must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("row value".into()));
        }
        Ok(Self { support, values })
    }

    /// Builds a row from unordered `(col, value)` pairs.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.sort_by_key(|&(c, _)| c);
        let (support, values) = pairs.into_iter().unzip();
        Self::new(support, values)
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn get(&self, col: usize) -> Option<f64> {
        self.support.binary_search(&col).ok().map(|k| self.values[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.support.iter().copied().zip(self.values.iter().copied())
    }

    pub fn scale(&mut self, s: f64) {
        self.values.iter_mut().for_each(|v| *v *= s);
    }
}

/// `n × p` coefficient matrix `X`.
///
/// The structural support is tracked separately from the values: an entry
/// that is stored stays in the support (and counts against the budget) even
/// when its value is exactly zero. Row supports `Ω^i` and column supports
/// `Ω_j` are kept as two views of one entry set.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCoeff {
    n: usize,
    p: usize,
    rows: Vec<BTreeMap<usize, f64>>,
    cols: Vec<BTreeSet<usize>>,
    nnz: usize,
}

impl SparseCoeff {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::invalid(format!(
                "coefficient shape {n}x{p} must be at least 1x1"
            )));
        }
        Ok(Self {
            n,
            p,
            rows: vec![BTreeMap::new(); n],
            cols: vec![BTreeSet::new(); p],
            nnz: 0,
        })
    }

    pub fn from_triplets(n: usize, p: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut x = Self::new(n, p)?;
        for (i, j, v) in triplets {
            x.insert(i, j, v)?;
        }
        Ok(x)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    /// Structural nonzero count `‖X‖₀`.
    #[inline]
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.p {
            return Err(Error::invalid(format!(
                "entry ({i}, {j}) outside {}x{}",
                self.n, self.p
            )));
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.rows.get(i).and_then(|r| r.get(&j).copied())
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some()
    }

    /// Adds a new structural entry. Fails if it already exists.
    pub fn insert(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        self.check_index(i, j)?;
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("coefficient ({i}, {j})")));
        }
        if self.rows[i].contains_key(&j) {
            return Err(Error::invalid(format!("duplicate entry ({i}, {j})")));
        }
        self.rows[i].insert(j, value);
        self.cols[j].insert(i);
        self.nnz += 1;
        Ok(())
    }

    /// Overwrites the value of an existing structural entry.
    pub fn set_value(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        self.check_index(i, j)?;
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("coefficient ({i}, {j})")));
        }
        match self.rows[i].get_mut(&j) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::invalid(format!("({i}, {j}) is not in the support"))),
        }
    }

    pub fn remove(&mut self, i: usize, j: usize) -> Option<f64> {
        let v = self.rows.get_mut(i)?.remove(&j)?;
        self.cols[j].remove(&i);
        self.nnz -= 1;
        Some(v)
    }

    /// `k^i = |Ω^i|`
    pub fn row_len(&self, i: usize) -> usize {
        self.rows[i].len()
    }

    /// `k_j = |Ω_j|`
    pub fn col_len(&self, j: usize) -> usize {
        self.cols[j].len()
    }

    pub fn row_support(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i].keys().copied()
    }

    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.rows[i].iter().map(|(&j, &v)| (j, v))
    }

    pub fn col_support(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.cols[j].iter().copied()
    }

    /// `(row, value)` pairs of column `j` in ascending row order.
    pub fn col_entries(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.cols[j].iter().map(move |&i| (i, self.rows[i][&j]))
    }

    pub fn row(&self, i: usize) -> SparseRow {
        let (support, values) = self.rows[i].iter().map(|(&j, &v)| (j, v)).unzip();
        SparseRow { support, values }
    }

    /// Replaces row `i` (support and values) with `row`.
    pub fn replace_row(&mut self, i: usize, row: &SparseRow) -> Result<()> {
        if i >= self.n {
            return Err(Error::invalid(format!("row {i} out of range")));
        }
        if let Some(&last) = row.support.last() {
            if last >= self.p {
                return Err(Error::invalid(format!("column {last} out of range")));
            }
        }
        for &j in std::mem::take(&mut self.rows[i]).keys() {
            self.cols[j].remove(&i);
            self.nnz -= 1;
        }
        for (j, v) in row.iter() {
            self.rows[i].insert(j, v);
            self.cols[j].insert(i);
            self.nnz += 1;
        }
        Ok(())
    }

    pub fn scale_row(&mut self, i: usize, s: f64) {
        for v in self.rows[i].values_mut() {
            *v *= s;
        }
    }

    /// All entries as `(row, col, value)`, sorted by `(col, row)`.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz);
        for j in 0..self.p {
            out.extend(self.col_entries(j).map(|(i, v)| (i, j, v)));
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n, self.p).expect("nonempty shape");
        for (i, j, v) in self.entries() {
            d.set(i, j, v);
        }
        d
    }

    /// Checks that the row and column views describe the same entry set and
    /// that the cached count matches it.
    pub fn audit(&self) -> Result<()> {
        let mut from_rows = 0;
        for (i, r) in self.rows.iter().enumerate() {
            for &j in r.keys() {
                if j >= self.p || !self.cols[j].contains(&i) {
                    return Err(Error::Invariant(format!(
                        "row view has ({i}, {j}) missing from column view"
                    )));
                }
            }
            from_rows += r.len();
        }
        let from_cols: usize = self.cols.iter().map(|c| c.len()).sum();
        if from_rows != from_cols || from_rows != self.nnz {
            return Err(Error::Invariant(format!(
                "entry counts disagree: rows {from_rows}, columns {from_cols}, cached {}",
                self.nnz
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn views_stay_consistent() {
        let mut x = SparseCoeff::new(3, 4).unwrap();
        x.insert(0, 1, 1.5).unwrap();
        x.insert(2, 1, -1.0).unwrap();
        x.insert(2, 3, 0.0).unwrap();
        assert_eq!(x.nnz(), 3);
        assert_eq!(x.col_len(1), 2);
        assert_eq!(x.row_len(2), 2);
        assert!(x.insert(0, 1, 2.0).is_err());
        assert!(x.insert(3, 0, 2.0).is_err());
        x.audit().unwrap();

        x.replace_row(2, &SparseRow::from_pairs(vec![(0, 4.0)]).unwrap())
            .unwrap();
        assert_eq!(x.nnz(), 2);
        assert_eq!(x.col_len(1), 1);
        assert_eq!(x.col_support(0).collect::<Vec<_>>(), vec![2]);
        x.audit().unwrap();

        assert_eq!(x.remove(0, 1), Some(1.5));
        assert_eq!(x.remove(0, 1), None);
        assert_eq!(x.nnz(), 1);
        x.audit().unwrap();
    }

    #[test]
    fn structural_zeros_count() {
        let x = SparseCoeff::from_triplets(2, 2, [(0, 0, 0.0), (1, 1, 0.0)]).unwrap();
        assert_eq!(x.nnz(), 2);
        assert_eq!(x.get(0, 0), Some(0.0));
        assert_eq!(x.get(0, 1), None);
    }

    #[test]
    fn entries_sorted_by_column_then_row() {
        let x = SparseCoeff::from_triplets(3, 2, [(2, 0, 1.0), (0, 1, 2.0), (1, 0, 3.0)]).unwrap();
        assert_eq!(x.entries(), vec![(1, 0, 3.0), (2, 0, 1.0), (0, 1, 2.0)]);
    }

    #[test]
    fn sparse_row_validation() {
        assert!(SparseRow::new(vec![1, 1], vec![0.0, 0.0]).is_err());
        assert!(SparseRow::new(vec![2, 1], vec![0.0, 0.0]).is_err());
        assert!(SparseRow::new(vec![1], vec![]).is_err());
        let r = SparseRow::from_pairs(vec![(3, 1.0), (1, 2.0)]).unwrap();
        assert_eq!(r.support(), &[1, 3]);
        assert_eq!(r.get(3), Some(1.0));
    }
}
