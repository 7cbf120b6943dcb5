//! Dense linear algebra over GF(2).
//!
//! Vectors are packed little-endian into `u64` words (bit `i` lives in word
//! `i / 64` at position `i % 64`) and matrices are stored row-major as a
//! sequence of such vectors, so Gaussian elimination is a sweep of word XORs.
//! Padding bits past `len` are always zero.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is singular (rank {rank} < {dim})")]
    Singular { rank: usize, dim: usize },
}

/// A vector in GF(2)^len.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 entries; any nonzero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// The low `len` bits of `mask`, bit `i` becoming coordinate `i`.
    pub fn from_mask(len: usize, mask: u128) -> Self {
        assert!(len <= 128, "from_mask supports at most 128 coordinates");
        let mut v = Self::zeros(len);
        for i in 0..len {
            if (mask >> i) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in and");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn xor(&self, other: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set coordinates, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    /// The coordinates as a `u128` mask. Panics if `len > 128`.
    pub fn to_mask(&self) -> u128 {
        assert!(self.len <= 128, "to_mask supports at most 128 coordinates");
        let mut m = 0u128;
        for (wi, &w) in self.words.iter().enumerate() {
            m |= (w as u128) << (wi * WORD);
        }
        m
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Restriction to the given coordinates, in the given order.
    pub fn select(&self, idx: &[usize]) -> F2Vector {
        let mut out = F2Vector::zeros(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            if self.get(i) {
                out.set(k, true);
            }
        }
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({self})")
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for F2Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A `rows x cols` matrix over GF(2), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. Panics on ragged input.
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<F2Vector> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                F2Vector::from_bits(r)
            })
            .collect();
        Self {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix from row vectors that all have length `cols`.
    pub fn from_row_vectors(cols: usize, rows: Vec<F2Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        Self {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_columns(rows: usize, columns: &[F2Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value)
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i].flip(j)
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[F2Vector] {
        &self.data
    }

    /// XORs `v` into row `i`.
    pub fn xor_into_row(&mut self, i: usize, v: &F2Vector) {
        self.data[i].xor_assign(v);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    pub fn column(&self, j: usize) -> F2Vector {
        let mut c = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<F2Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for j in row.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vector::is_zero)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(F2Vector::count_ones).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self.get(i, i))
    }

    /// Square, ones on the diagonal, zeros below it.
    pub fn is_unit_upper_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| self.get(i, i) && (0..i).all(|j| !self.get(i, j)))
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> F2Matrix {
        let data = row_idx.iter().map(|&i| self.data[i].select(col_idx)).collect();
        F2Matrix {
            rows: row_idx.len(),
            cols: col_idx.len(),
            data,
        }
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(F2Error::DimensionMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.xor_assign(b);
        }
        Ok(out)
    }

    /// GF(2) product `self * other`.
    pub fn multiply(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.cols != other.rows {
            return Err(F2Error::DimensionMismatch {
                op: "multiply",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = F2Vector::zeros(other.cols);
                for k in row.iter_ones() {
                    acc.xor_assign(&other.data[k]);
                }
                acc
            })
            .collect();
        Ok(F2Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &F2Vector) -> Result<F2Vector, F2Error> {
        if self.cols != v.len() {
            return Err(F2Error::DimensionMismatch {
                op: "mul_vec",
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        let mut out = F2Vector::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Kronecker product; entry `((i,i'),(j,j'))` sits at row `i*m' + i'`,
    /// column `j*n' + j'`.
    pub fn tensor(&self, other: &F2Matrix) -> F2Matrix {
        let (m2, n2) = (other.rows, other.cols);
        let mut out = F2Matrix::zeros(self.rows * m2, self.cols * n2);
        for i in 0..self.rows {
            for j in self.data[i].iter_ones() {
                for i2 in 0..m2 {
                    for j2 in other.data[i2].iter_ones() {
                        out.set(i * m2 + i2, j * n2 + j2, true);
                    }
                }
            }
        }
        out
    }

    /// Copy with the diagonal cleared.
    pub fn off_diag(&self) -> Result<F2Matrix, F2Error> {
        if !self.is_square() {
            return Err(F2Error::NotSquare {
                op: "off_diag",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out.set(i, i, false);
        }
        Ok(out)
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for r in rows.iter_mut().skip(rank + 1) {
                if r.get(col) {
                    r.xor_assign(&pivot);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    pub fn invert(&self) -> Result<F2Matrix, F2Error> {
        if !self.is_square() {
            return Err(F2Error::NotSquare {
                op: "invert",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = F2Matrix::identity(n).data;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| a[r].get(col)) else {
                return Err(F2Error::Singular {
                    rank: self.rank(),
                    dim: n,
                });
            };
            a.swap(col, p);
            inv.swap(col, p);
            let (pa, pi) = (a[col].clone(), inv[col].clone());
            for r in 0..n {
                if r != col && a[r].get(col) {
                    a[r].xor_assign(&pa);
                    inv[r].xor_assign(&pi);
                }
            }
        }
        Ok(F2Matrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// Some `c` with `self * c = b`, free coordinates set to zero, or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &F2Vector) -> Result<Option<F2Vector>, F2Error> {
        if b.len() != self.rows {
            return Err(F2Error::DimensionMismatch {
                op: "solve",
                left: (self.rows, self.cols),
                right: (b.len(), 1),
            });
        }
        let k = self.cols;
        // Augmented rows [a | b], reduced to row echelon form.
        let mut aug: Vec<F2Vector> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = F2Vector::zeros(k + 1);
                for j in row.iter_ones() {
                    r.set(j, true);
                }
                r.set(k, b.get(i));
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..k {
            let Some(p) = (rank..aug.len()).find(|&r| aug[r].get(col)) else {
                continue;
            };
            aug.swap(rank, p);
            let pivot = aug[rank].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if aug[rank..].iter().any(|r| r.get(k)) {
            return Ok(None);
        }
        let mut x = F2Vector::zeros(k);
        for (r, &col) in pivots.iter().enumerate() {
            x.set(col, aug[r].get(k));
        }
        Ok(Some(x))
    }

    /// Finds a unit upper triangular `q` with `x * q = z`.
    ///
    /// Column `i` of `x * q` is `x_i + sum_{j<i} q_{ji} x_j`, so columns are
    /// solved left to right against the span of the earlier columns of `x`,
    /// with free coefficients set to zero. `Ok(None)` means no such `q`.
    pub fn solve_unit_upper_triangular(
        x: &F2Matrix,
        z: &F2Matrix,
    ) -> Result<Option<F2Matrix>, F2Error> {
        if x.rows != z.rows || x.cols != z.cols {
            return Err(F2Error::DimensionMismatch {
                op: "solve_unit_upper_triangular",
                left: (x.rows, x.cols),
                right: (z.rows, z.cols),
            });
        }
        let r = x.cols;
        let xcols = x.columns();
        let zcols = z.columns();
        let mut q = F2Matrix::identity(r);
        for i in 0..r {
            let target = zcols[i].xor(&xcols[i]);
            if target.is_zero() {
                continue;
            }
            let prefix = F2Matrix::from_columns(x.rows, &xcols[..i]);
            match prefix.solve(&target)? {
                Some(c) => {
                    for j in c.iter_ones() {
                        q.set(j, i, true);
                    }
                }
                None => return Ok(None),
            }
        }
        Ok(Some(q))
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Serialized as a list of `"0101"` row strings.
impl Serialize for F2Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.data.iter().map(|r| r.to_string()))
    }
}
