use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Sparse integer matrix with arbitrary-precision entries.
///
/// Zero entries are never stored; every stored index is in range.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} but the matrix has {cols} columns",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        Ok(m)
    }

    /// Builds a matrix from sparse rows. Duplicate columns within a row are summed.
    pub fn from_sparse_rows(cols: usize, rows: &[SparseRow]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row {
                if *j >= cols {
                    return Err(Error::DimensionMismatch(format!("column index {j} out of range for {cols} columns")));
                }
                let cur = m.get(i, *j);
                m.set(i, *j, cur + v);
            }
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[BigInt], rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Appends the given sparse rows at the bottom.
    pub fn push_sparse_rows(&mut self, rows: &[SparseRow]) -> Result<()> {
        for row in rows {
            let i = self.rows;
            self.rows += 1;
            for (j, v) in row {
                if *j >= self.cols {
                    return Err(Error::DimensionMismatch(format!(
                        "column index {j} out of range for {} columns",
                        self.cols
                    )));
                }
                let cur = self.get(i, *j);
                self.set(i, *j, cur + v);
            }
        }
        Ok(())
    }

    pub fn sparse_row(&self, i: usize) -> SparseRow {
        self.entries.range((i, 0)..(i + 1, 0)).map(|(&(_, j), v)| (j, v.clone())).collect()
    }

    pub fn sparse_rows(&self) -> Vec<SparseRow> {
        let mut out = vec![Vec::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            out[i].push((j, v.clone()));
        }
        out
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.cols];
        for (j, v) in self.sparse_row(i) {
            out[j] = v;
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn from_dense(d: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(d.len(), cols);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            m.entries.insert((j, i), v.clone());
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rhs = other.sparse_rows();
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for (j, b) in &rhs[k] {
                *acc.entry((i, *j)).or_insert_with(BigInt::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(IntMatrix { rows: self.rows, cols: other.cols, entries: acc })
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (&(i, j), a) in &self.entries {
            if !v[i].is_zero() {
                out[j] += &v[i] * a;
            }
        }
        Ok(out)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|(i, j)| i == j)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v.div_floor(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.determinant(), Ok(d) if d.abs().is_one())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `target -= q * src` on sparse rows.
pub(crate) fn row_axpy(target: &SparseRow, q: &BigInt, src: &SparseRow) -> SparseRow {
    if q.is_zero() {
        return target.clone();
    }
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < src.len() {
        let ca = target.get(a).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = src.get(b).map(|e| e.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(target[a].clone());
            a += 1;
        } else if cb < ca {
            out.push((cb, -(q * &src[b].1)));
            b += 1;
        } else {
            let v = &target[a].1 - q * &src[b].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

pub(crate) fn row_scale(row: &SparseRow, s: &BigInt) -> SparseRow {
    if s.is_zero() {
        return Vec::new();
    }
    row.iter().map(|(j, v)| (*j, v * s)).collect()
}

pub(crate) fn dense_to_sparse(v: &[BigInt]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect()
}

pub(crate) fn sparse_to_dense(row: &SparseRow, cols: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cols];
    for (j, v) in row {
        out[*j] = v.clone();
    }
    out
}

/// Quotient of `a` by `b` rounded to the nearest integer, so the remainder
/// satisfies `|a - q*b| <= |b|/2`.
pub(crate) fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    let two_r: BigInt = &r * 2;
    // r carries the sign of b; stepping q up moves r towards zero either way
    if two_r.abs() > b.abs() {
        q += 1;
    }
    q
}
