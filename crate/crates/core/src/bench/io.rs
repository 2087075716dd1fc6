//! Plain-text matrix formats.
//!
//! Dense: a header line `m p`, then `m` lines of `p` space-separated reals.
//! Sparse: a header line `n p nnz`, then `nnz` lines `row col value` with
//! 1-based indices, sorted by column and then row.
//!
//! Values are written in Rust's shortest round-trip form, so saving and
//! loading reproduces every bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::sparse::SparseCoeff;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("{what} `{tok}` is not a non-negative integer")))
}

fn parse_real(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("`{tok}` is not finite")));
    }
    Ok(v)
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(parse_err(hl, "header must be `rows cols`"));
    }
    let m = parse_count(dims[0], hl, "row count")?;
    let p = parse_count(dims[1], hl, "column count")?;
    if m == 0 || p == 0 {
        return Err(parse_err(hl, "matrix dimensions must be positive"));
    }
    let mut data = vec![0.0; m * p];
    for i in 0..m {
        let (ln, line) = lines.next().ok_or_else(|| {
            parse_err(
                i + 2,
                format!("unexpected end of file: matrix row {} of {m} is missing", i + 1),
            )
        })?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != p {
            return Err(parse_err(
                ln,
                format!("matrix row {} has {} entries, expected {p}", i + 1, toks.len()),
            ));
        }
        for (j, tok) in toks.iter().enumerate() {
            data[j * m + i] = parse_real(tok, ln)?;
        }
    }
    for (ln, line) in lines {
        if !line.trim().is_empty() {
            return Err(parse_err(ln, format!("extra data after {m} declared rows")));
        }
    }
    DenseMatrix::from_col_major(m, p, data)
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", a.get(i, j));
        }
        out.push('\n');
    }
    out
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    parse_matrix(&fs::read_to_string(path).map_err(|e| Error::io_at(path, e))?)
}

pub fn save_matrix(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_matrix(a)).map_err(|e| Error::io_at(path, e))?;
    Ok(())
}

pub fn parse_sparse(text: &str) -> Result<SparseCoeff> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(parse_err(hl, "header must be `rows cols nnz`"));
    }
    let n = parse_count(dims[0], hl, "row count")?;
    let p = parse_count(dims[1], hl, "column count")?;
    let nnz = parse_count(dims[2], hl, "nonzero count")?;
    let mut x = SparseCoeff::new(n, p).map_err(|e| parse_err(hl, e.to_string()))?;
    for k in 0..nnz {
        let (ln, line) = lines.next().ok_or_else(|| {
            parse_err(
                k + 2,
                format!("unexpected end of file: entry {} of {nnz} is missing", k + 1),
            )
        })?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(ln, "entry must be `row col value`"));
        }
        let i = parse_count(toks[0], ln, "row")?;
        let j = parse_count(toks[1], ln, "column")?;
        if i == 0 || j == 0 {
            return Err(parse_err(ln, "indices are 1-based"));
        }
        let v = parse_real(toks[2], ln)?;
        x.insert(i - 1, j - 1, v).map_err(|e| parse_err(ln, e.to_string()))?;
    }
    for (ln, line) in lines {
        if !line.trim().is_empty() {
            return Err(parse_err(ln, format!("extra data after {nnz} declared entries")));
        }
    }
    Ok(x)
}

pub fn format_sparse(x: &SparseCoeff) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", x.n(), x.p(), x.nnz());
    for (i, j, v) in x.entries() {
        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, v);
    }
    out
}

pub fn load_sparse(path: impl AsRef<Path>) -> Result<SparseCoeff> {
    let path = path.as_ref();
    parse_sparse(&fs::read_to_string(path).map_err(|e| Error::io_at(path, e))?)
}

pub fn save_sparse(path: impl AsRef<Path>, x: &SparseCoeff) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_sparse(x)).map_err(|e| Error::io_at(path, e))?;
    Ok(())
}
