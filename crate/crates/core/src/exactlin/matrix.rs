//! Exact matrices and the elimination routines built on them.
//!
//! Pivoting is by leading column: each row contributes the first nonzero
//! entry in column order as its pivot. Over ℚ there is no magnitude
//! heuristic, so entry growth during elimination is bounded only by the
//! input sizes; large dense rational systems can get expensive.

use std::collections::BTreeMap;

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Sparse vector: `(index, value)` pairs sorted by index, without zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

const DENSE_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    Dense(Vec<Scalar>),
    Sparse(Vec<SparseVec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl Matrix {
    fn from_sparse_rows(field: FieldSpec, rows: usize, cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert_eq!(data.len(), rows);
        let storage = if rows < DENSE_LIMIT && cols < DENSE_LIMIT {
            let mut dense = vec![field.zero(); rows * cols];
            for (i, row) in data.into_iter().enumerate() {
                for (j, v) in row {
                    dense[i * cols + j] = v;
                }
            }
            Storage::Dense(dense)
        } else {
            Storage::Sparse(data)
        };
        Matrix { field, rows, cols, storage }
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self::from_sparse_rows(field, rows, cols, vec![Vec::new(); rows])
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, field.one())]).collect();
        Self::from_sparse_rows(field, n, n, data)
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .into_iter()
            .map(|row| row.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(Self::from_sparse_rows(field, r, c, data))
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect())
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(field: FieldSpec, rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in entries {
            if i >= rows || j >= cols {
                return Err(Error::DimensionMismatch(format!("entry ({i},{j}) outside {rows}x{cols}")));
            }
            let slot = acc[i].entry(j).or_insert_with(|| field.zero());
            *slot = field.add(slot, &v);
        }
        let data = acc.into_iter().map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Ok(Self::from_sparse_rows(field, rows, cols, data))
    }

    /// Matrix whose columns are the given dense vectors, each of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let entries = columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().enumerate().map(move |(i, v)| (i, j, v.clone())))
            .filter(|(_, _, v)| !v.is_zero());
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("column length differs from row count".into()));
        }
        Self::from_triplets(field, rows, columns.len(), entries)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j].clone(),
            Storage::Sparse(s) => match s[i].binary_search_by_key(&j, |(c, _)| *c) {
                Ok(k) => s[i][k].1.clone(),
                Err(_) => self.field.zero(),
            },
        }
    }

    pub fn row(&self, i: usize) -> SparseVec {
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols..(i + 1) * self.cols]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect(),
            Storage::Sparse(s) => s[i].clone(),
        }
    }

    pub fn sparse_rows(&self) -> Vec<SparseVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.rows).all(|i| self.row(i).is_empty())
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, Scalar)> {
        (0..self.rows).flat_map(|i| self.row(i).into_iter().map(move |(j, v)| (i, j, v))).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (i, j, v) in self.entries() {
            cols[j].push((i, v));
        }
        Self::from_sparse_rows(self.field, self.cols, self.rows, cols)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let rhs = other.sparse_rows();
        let data = (0..self.rows)
            .map(|i| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, a) in self.row(i) {
                    for (j, b) in &rhs[k] {
                        let slot = acc.entry(*j).or_insert_with(|| f.zero());
                        *slot = f.add(slot, &f.mul(&a, b));
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(Self::from_sparse_rows(f, self.rows, other.cols, data))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{} columns, vector of length {}", self.cols, v.len())));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().fold(f.zero(), |acc, (j, a)| f.add(&acc, &f.mul(a, &v[*j]))))
            .collect())
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("subtraction of differently shaped matrices".into()));
        }
        let f = self.field;
        let entries = self
            .entries()
            .into_iter()
            .chain(other.entries().into_iter().map(|(i, j, v)| (i, j, f.neg(&v))));
        Matrix::from_triplets(f, self.rows, self.cols, entries)
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Matrix {
        let data = perm.iter().map(|&i| self.row(i)).collect();
        Self::from_sparse_rows(self.field, self.rows, self.cols, data)
    }
}

/// Returns `a + c·b` for sparse vectors.
pub fn axpy(field: FieldSpec, a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = field.mul(c, &b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(c, &b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(field: FieldSpec, c: &Scalar, v: &[(usize, Scalar)]) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, field.mul(c, x))).collect()
}

pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(field: FieldSpec, v: &[(usize, Scalar)], len: usize) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Row echelon form keyed by pivot column. Pivot rows are normalized to a
/// leading 1; each row may carry a tag vector recording how it was
/// combined from the inserted rows.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: FieldSpec,
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        Echelon { field, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `v` against every pivot, returning the remainder and the
    /// tag combination that was subtracted (`v = remainder + Σ tags`).
    pub fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let f = self.field;
        let mut used: SparseVec = Vec::new();
        let mut k = 0;
        while k < v.len() {
            let (col, coeff) = (v[k].0, v[k].1.clone());
            match self.pivots.get(&col) {
                Some((row, tag)) => {
                    v = axpy(f, &v, &f.neg(&coeff), row);
                    used = axpy(f, &used, &coeff, tag);
                }
                None => k += 1,
            }
        }
        (v, used)
    }

    /// Inserts `v` (tagged by `tag`). Returns `false` if `v` was already in the span.
    pub fn insert(&mut self, v: SparseVec, tag: SparseVec) -> bool {
        let f = self.field;
        let (rem, used) = self.reduce(v);
        let Some((lead, lead_val)) = rem.first().cloned() else {
            return false;
        };
        let inv = f.inv(&lead_val).expect("nonzero leading entry");
        let tag = axpy(f, &tag, &f.neg(&f.one()), &used);
        self.pivots.insert(lead, (scale(f, &inv, &rem), scale(f, &inv, &tag)));
        true
    }

    /// Turns the echelon form into reduced row echelon form.
    pub fn fully_reduce(&mut self) {
        let f = self.field;
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for c in cols {
            let (mut row, mut tag) = self.pivots.remove(&c).unwrap();
            // pivots with larger column are already reduced
            let mut k = 1;
            while k < row.len() {
                let (col, coeff) = (row[k].0, row[k].1.clone());
                if let Some((prow, ptag)) = self.pivots.get(&col) {
                    row = axpy(f, &row, &f.neg(&coeff), prow);
                    tag = axpy(f, &tag, &f.neg(&coeff), ptag);
                } else {
                    k += 1;
                }
            }
            self.pivots.insert(c, (row, tag));
        }
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (usize, &SparseVec, &SparseVec)> {
        self.pivots.iter().map(|(c, (r, t))| (*c, r, t))
    }
}

pub fn rank(m: &Matrix) -> usize {
    let mut e = Echelon::new(m.field);
    for i in 0..m.rows {
        e.insert(m.row(i), Vec::new());
    }
    e.rank()
}

/// Basis of the right null space, as dense column vectors.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    let f = m.field;
    let mut e = Echelon::new(f);
    for i in 0..m.rows {
        e.insert(m.row(i), Vec::new());
    }
    e.fully_reduce();
    let pivot_rows: Vec<(usize, SparseVec)> = e.pivot_rows().map(|(c, r, _)| (c, r.clone())).collect();
    let is_pivot: Vec<bool> = {
        let mut p = vec![false; m.cols];
        for (c, _) in &pivot_rows {
            p[*c] = true;
        }
        p
    };
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); m.cols];
            v[free] = f.one();
            for (pc, row) in &pivot_rows {
                if let Ok(k) = row.binary_search_by_key(&free, |(c, _)| *c) {
                    v[*pc] = f.neg(&row[k].1);
                }
            }
            v
        })
        .collect()
}

/// Some `x` with `m·x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!("{} rows, right-hand side of length {}", m.rows, b.len())));
    }
    let f = m.field;
    let n = m.cols;
    let mut e = Echelon::new(f);
    for i in 0..m.rows {
        let mut row = m.row(i);
        if !b[i].is_zero() {
            row.push((n, b[i].clone()));
        }
        e.insert(row, Vec::new());
    }
    if e.pivot_columns().any(|c| c == n) {
        return Ok(None);
    }
    e.fully_reduce();
    let mut x = vec![f.zero(); n];
    for (c, row, _) in e.pivot_rows() {
        if let Some((last, v)) = row.last() {
            if *last == n {
                x[c] = v.clone();
            }
        }
    }
    Ok(Some(x))
}
