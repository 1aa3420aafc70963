//! Row-major dense matrices over a prime field and the classical kernels
//! built on them.
//!
//! Indices are 0-based. A square `n x n` matrix is *left triangular* when
//! every nonzero entry `(i, j)` satisfies `i + j <= n - 2` (in 1-based
//! indices: `i + j <= n`), i.e. it lies strictly above the anti-diagonal.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    field: PrimeField,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            field,
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.modulus();
        }
        m
    }

    /// Builds a matrix from row-major data, reducing every entry.
    pub fn from_row_major(field: PrimeField, rows: usize, cols: usize, mut data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        for x in data.iter_mut() {
            *x = field.reduce(*x);
        }
        Ok(DenseMatrix {
            rows,
            cols,
            data,
            field,
        })
    }

    /// Convenience constructor from nested rows; panics on ragged input.
    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, rows: &[R]) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            assert_eq!(r.as_ref().len(), n, "ragged rows");
            data.extend(r.as_ref().iter().map(|&x| field.reduce(x)));
        }
        DenseMatrix {
            rows: m,
            cols: n,
            data,
            field,
        }
    }

    pub fn from_diagonal(field: PrimeField, diag: &[u64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = field.reduce(d);
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

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.field.reduce(v);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn diagonal(&self) -> Vec<u64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Copy of rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let mut s = Self::zeros(self.field, r1 - r0, c1 - c0);
        for i in r0..r1 {
            s.row_mut(i - r0).copy_from_slice(&self.row(i)[c0..c1]);
        }
        s
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &DenseMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let cols = block.cols;
            self.row_mut(r0 + i)[c0..c0 + cols].copy_from_slice(block.row(i));
        }
    }

    /// Adds `block` into the block starting at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &DenseMatrix, counter: &mut OpCounter) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        let f = self.field;
        for i in 0..block.rows {
            let src = block.row(i);
            let dst = &mut self.row_mut(r0 + i)[c0..c0 + src.len()];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = f.add(*d, s);
            }
        }
        counter.record((block.rows * block.cols) as u64, 0, 0);
    }

    /// `size x size` zero matrix with `self` placed at `(r0, c0)`.
    pub fn embed(&self, size: usize, r0: usize, c0: usize) -> Self {
        let mut out = Self::zeros(self.field, size, size);
        out.set_block(r0, c0, self);
        out
    }

    /// `P * self`: row `i` moves to row `p(i)`.
    pub fn permute_rows(&self, p: &Permutation) -> Self {
        assert_eq!(p.len(), self.rows);
        let mut out = Self::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            out.row_mut(p.apply(i)).copy_from_slice(self.row(i));
        }
        out
    }

    /// `P^T * self`: row `p(i)` moves to row `i`.
    pub fn permute_rows_inv(&self, p: &Permutation) -> Self {
        assert_eq!(p.len(), self.rows);
        let mut out = Self::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            out.row_mut(i).copy_from_slice(self.row(p.apply(i)));
        }
        out
    }

    /// `self * Q`: column `j` moves to column `q(j)`.
    pub fn permute_cols(&self, q: &Permutation) -> Self {
        assert_eq!(q.len(), self.cols);
        let mut out = Self::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = out.row_mut(i);
            for (j, &x) in src.iter().enumerate() {
                dst[q.apply(j)] = x;
            }
        }
        out
    }

    /// `self * Q^T`: column `q(j)` moves to column `j`.
    pub fn permute_cols_inv(&self, q: &Permutation) -> Self {
        assert_eq!(q.len(), self.cols);
        let mut out = Self::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = out.row_mut(i);
            for (j, d) in dst.iter_mut().enumerate() {
                *d = src[q.apply(j)];
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<Self> {
        self.check_same_shape("add", other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(DenseMatrix { data, ..*self })
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<Self> {
        self.check_same_shape("sub", other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(DenseMatrix { data, ..*self })
    }

    /// Scales row `i` by `d[i]`, i.e. `diag(d) * self`.
    pub fn scale_rows(&self, d: &[u64], counter: &mut OpCounter) -> Self {
        assert_eq!(d.len(), self.rows);
        let f = self.field;
        let mut out = self.clone();
        for (i, &s) in d.iter().enumerate() {
            for x in out.row_mut(i) {
                *x = f.mul(*x, s);
            }
        }
        counter.record(0, (self.rows * self.cols) as u64, 0);
        out
    }

    /// Scales column `j` by `d[j]`, i.e. `self * diag(d)`.
    pub fn scale_cols(&self, d: &[u64], counter: &mut OpCounter) -> Self {
        assert_eq!(d.len(), self.cols);
        let f = self.field;
        let mut out = self.clone();
        for i in 0..self.rows {
            for (x, &s) in out.row_mut(i).iter_mut().zip(d) {
                *x = f.mul(*x, s);
            }
        }
        counter.record(0, (self.rows * self.cols) as u64, 0);
        out
    }

    pub fn matvec(&self, x: &[u64], counter: &mut OpCounter) -> Result<Vec<u64>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let f = self.field;
        let y = (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(0, |acc, (&a, &b)| f.mul_add(a, b, acc)))
            .collect();
        counter.record(
            (self.rows * self.cols.saturating_sub(1)) as u64,
            (self.rows * self.cols) as u64,
            0,
        );
        Ok(y)
    }

    /// Left triangularity with respect to the column count.
    pub fn is_left_triangular(&self) -> bool {
        self.first_outside_left().is_none()
    }

    pub(crate) fn first_outside_left(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i + j + 2 > self.cols && self.get(i, j) != 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn check_left_triangular(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        match self.first_outside_left() {
            Some((row, col)) => Err(Error::NotLeftTriangular { row, col }),
            None => Ok(()),
        }
    }

    fn check_same_shape(&self, op: &'static str, other: &DenseMatrix) -> Result<()> {
        check_fields(self, other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }
}

pub(crate) fn check_fields(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.field != b.field {
        return Err(Error::FieldMismatch {
            left: a.field.modulus(),
            right: b.field.modulus(),
        });
    }
    Ok(())
}

/// Classical product; records `m*k*n` multiplications.
pub fn mat_mul(a: &DenseMatrix, b: &DenseMatrix, counter: &mut OpCounter) -> Result<DenseMatrix> {
    check_fields(a, b)?;
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "mat_mul",
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let f = a.field;
    let (m, k, n) = (a.rows, a.cols, b.cols);
    let mut c = DenseMatrix::zeros(f, m, n);
    for i in 0..m {
        let arow = a.row(i);
        let crow = &mut c.data[i * n..(i + 1) * n];
        for (t, &ait) in arow.iter().enumerate() {
            let brow = &b.data[t * n..(t + 1) * n];
            for (cij, &btj) in crow.iter_mut().zip(brow) {
                *cij = f.mul_add(ait, btj, *cij);
            }
        }
    }
    counter.record((m * n * k.saturating_sub(1)) as u64, (m * k * n) as u64, 0);
    Ok(c)
}

/// `c - a * b`.
pub fn mat_mul_sub(c: &DenseMatrix, a: &DenseMatrix, b: &DenseMatrix, counter: &mut OpCounter) -> Result<DenseMatrix> {
    let ab = mat_mul(a, b, counter)?;
    let out = c.sub(&ab)?;
    counter.record((c.rows * c.cols) as u64, 0, 0);
    Ok(out)
}

/// Solves `L * X = B` for unit lower triangular `L` (only its lower part is
/// read).
pub fn trsm_unit_lower(l: &DenseMatrix, b: &DenseMatrix, counter: &mut OpCounter) -> Result<DenseMatrix> {
    check_fields(l, b)?;
    if !l.is_square() {
        return Err(Error::NotSquare { rows: l.rows, cols: l.cols });
    }
    if l.rows != b.rows {
        return Err(Error::DimensionMismatch {
            op: "trsm_unit_lower",
            left: (l.rows, l.cols),
            right: (b.rows, b.cols),
        });
    }
    if let Some(index) = (0..l.rows).find(|&i| l.get(i, i) != 1) {
        return Err(Error::NonUnitDiagonal { index });
    }
    let f = l.field;
    let (r, k) = (b.rows, b.cols);
    let mut x = b.clone();
    for i in 0..r {
        for t in 0..i {
            let lit = l.get(i, t);
            if lit == 0 {
                continue;
            }
            let (done, rest) = x.data.split_at_mut(i * k);
            let xt = &done[t * k..(t + 1) * k];
            for (xi, &xv) in rest[..k].iter_mut().zip(xt) {
                *xi = f.sub(*xi, f.mul(lit, xv));
            }
            counter.record(k as u64, k as u64, 0);
        }
    }
    Ok(x)
}

/// Solves `X * U = B` for invertible upper triangular `U` (only its upper
/// part is read).
pub fn trsm_upper_right(b: &DenseMatrix, u: &DenseMatrix, counter: &mut OpCounter) -> Result<DenseMatrix> {
    check_fields(b, u)?;
    if !u.is_square() {
        return Err(Error::NotSquare { rows: u.rows, cols: u.cols });
    }
    if u.rows != b.cols {
        return Err(Error::DimensionMismatch {
            op: "trsm_upper_right",
            left: (b.rows, b.cols),
            right: (u.rows, u.cols),
        });
    }
    let f = u.field;
    let r = u.rows;
    let mut inv_diag = Vec::with_capacity(r);
    for j in 0..r {
        let d = u.get(j, j);
        if d == 0 {
            return Err(Error::Singular { index: j });
        }
        inv_diag.push(f.inv(d)?);
    }
    counter.record(0, 0, r as u64);
    let mut x = b.clone();
    for i in 0..x.rows {
        let row = x.row_mut(i);
        for j in 0..r {
            let mut acc = row[j];
            for (t, &xt) in row[..j].iter().enumerate() {
                let utj = u.get(t, j);
                if utj != 0 {
                    acc = f.sub(acc, f.mul(xt, utj));
                    counter.record(1, 1, 0);
                }
            }
            row[j] = f.mul(acc, inv_diag[j]);
            counter.record(0, 1, 0);
        }
    }
    Ok(x)
}

/// Keeps only the entries strictly above the anti-diagonal.
pub fn left_part(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    Ok(left_part_unchecked(a))
}

pub(crate) fn left_part_unchecked(a: &DenseMatrix) -> DenseMatrix {
    let n = a.cols;
    let mut out = a.clone();
    for i in 0..a.rows {
        for j in 0..n {
            if i + j + 2 > n {
                out.data[i * n + j] = 0;
            }
        }
    }
    out
}

/// `J_m * A`.
pub fn reverse_rows(a: &DenseMatrix) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(a.field, a.rows, a.cols);
    for i in 0..a.rows {
        out.row_mut(a.rows - 1 - i).copy_from_slice(a.row(i));
    }
    out
}

/// `A * J_n`.
pub fn reverse_cols(a: &DenseMatrix) -> DenseMatrix {
    let mut out = a.clone();
    for i in 0..a.rows {
        out.row_mut(i).reverse();
    }
    out
}

/// Entries strictly below the diagonal.
pub fn strict_lower(a: &DenseMatrix) -> DenseMatrix {
    let mut out = a.clone();
    for i in 0..a.rows {
        for j in i..a.cols {
            out.data[i * a.cols + j] = 0;
        }
    }
    out
}

/// Entries strictly above the diagonal.
pub fn strict_upper(a: &DenseMatrix) -> DenseMatrix {
    let mut out = a.clone();
    for i in 0..a.rows {
        for j in 0..a.cols.min(i + 1) {
            out.data[i * a.cols + j] = 0;
        }
    }
    out
}

/// Rank by plain Gaussian elimination. Oracle use only.
pub fn rank(a: &DenseMatrix) -> usize {
    let f = a.field;
    let mut w = a.clone();
    let (m, n) = (w.rows, w.cols);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(piv) = (r..m).find(|&i| w.get(i, c) != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..n {
                w.data.swap(piv * n + j, r * n + j);
            }
        }
        let inv = f.inv(w.get(r, c)).expect("nonzero pivot");
        for i in r + 1..m {
            let factor = f.mul(w.get(i, c), inv);
            if factor == 0 {
                continue;
            }
            for j in c..n {
                let v = f.sub(w.get(i, j), f.mul(factor, w.get(r, j)));
                w.data[i * n + j] = v;
            }
        }
        r += 1;
    }
    r
}

/// Gauss-Jordan inverse.
pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let f = a.field;
    let n = a.rows;
    let mut w = a.clone();
    let mut inv = DenseMatrix::identity(f, n);
    for c in 0..n {
        let piv = (c..n).find(|&i| w.get(i, c) != 0).ok_or(Error::Singular { index: c })?;
        if piv != c {
            for j in 0..n {
                w.data.swap(piv * n + j, c * n + j);
                inv.data.swap(piv * n + j, c * n + j);
            }
        }
        let s = f.inv(w.get(c, c))?;
        for j in 0..n {
            w.data[c * n + j] = f.mul(w.data[c * n + j], s);
            inv.data[c * n + j] = f.mul(inv.data[c * n + j], s);
        }
        for i in 0..n {
            if i == c {
                continue;
            }
            let factor = w.get(i, c);
            if factor == 0 {
                continue;
            }
            for j in 0..n {
                w.data[i * n + j] = f.sub(w.data[i * n + j], f.mul(factor, w.data[c * n + j]));
                inv.data[i * n + j] = f.sub(inv.data[i * n + j], f.mul(factor, inv.data[c * n + j]));
            }
        }
    }
    Ok(inv)
}
