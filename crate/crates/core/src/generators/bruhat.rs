//! The Bruhat generator `(𝓛, 𝓔, 𝓤)` of a left triangular matrix.
//!
//! Every pivot `(r, c)` of the left triangular rank profile matrix owns one
//! column segment of 𝓛 (rows `r..=n-2-c` of column `c`) and one row segment
//! of 𝓤 (columns `c..=n-2-r` of row `r`). Both segments have length
//! `n - 1 - r - c`, start at the pivot, and nothing else is stored.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::matrix::{left_part, DenseMatrix};
use crate::orders::{eliminate_leading_quadrant, qs_order};
use crate::pluq::RankProfileMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatPivot {
    pub row: usize,
    pub col: usize,
    /// `𝓛[row + t][col]`; the first entry is the unit diagonal of `L`.
    pub lower: Vec<u64>,
    /// `𝓤[row][col + t]`; the first entry is a nonzero diagonal of `U`.
    pub upper: Vec<u64>,
}

impl BruhatPivot {
    pub fn segment_len(&self, n: usize) -> usize {
        n - 1 - self.row - self.col
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatGenerator {
    n: usize,
    field: PrimeField,
    pivots: Vec<BruhatPivot>,
}

impl BruhatGenerator {
    /// Checks pivot placement and segment lengths.
    pub fn new(n: usize, field: PrimeField, mut pivots: Vec<BruhatPivot>) -> Result<Self> {
        pivots.sort_by_key(|p| p.row);
        let positions = pivots.iter().map(|p| (p.row, p.col)).collect();
        RankProfileMatrix::new(n, n, positions)?;
        for p in &pivots {
            if p.row + p.col + 2 > n {
                return Err(Error::InvalidGenerator("pivot outside the left triangle"));
            }
            let len = p.segment_len(n);
            if p.lower.len() != len || p.upper.len() != len {
                return Err(Error::InvalidGenerator("segment length does not match pivot"));
            }
            if p.lower.iter().chain(&p.upper).any(|&x| x >= field.modulus()) {
                return Err(Error::InvalidGenerator("non-canonical residue"));
            }
        }
        Ok(BruhatGenerator { n, field, pivots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn pivots(&self) -> &[BruhatPivot] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// 𝓔 as a pivot list.
    pub fn rank_profile(&self) -> RankProfileMatrix {
        RankProfileMatrix::new(self.n, self.n, self.pivots.iter().map(|p| (p.row, p.col)).collect())
            .expect("validated at construction")
    }

    /// Left quasiseparable order read off 𝓔.
    pub fn order(&self) -> usize {
        qs_order(self.rank_profile().pivots(), self.n)
    }

    pub fn lower_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.n, self.n);
        for p in &self.pivots {
            for (t, &v) in p.lower.iter().enumerate() {
                m.set(p.row + t, p.col, v);
            }
        }
        m
    }

    pub fn upper_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.n, self.n);
        for p in &self.pivots {
            for (t, &v) in p.upper.iter().enumerate() {
                m.set(p.row, p.col + t, v);
            }
        }
        m
    }

    /// Number of stored positions of 𝓛 (equal to that of 𝓤).
    pub fn support(&self) -> usize {
        self.pivots.iter().map(|p| p.segment_len(self.n)).sum()
    }

    pub fn stored_elems(&self) -> usize {
        2 * self.support()
    }

    pub fn lower_nonzeros(&self) -> usize {
        self.pivots.iter().map(|p| p.lower.iter().filter(|&&x| x != 0).count()).sum()
    }

    pub fn upper_nonzeros(&self) -> usize {
        self.pivots.iter().map(|p| p.upper.iter().filter(|&&x| x != 0).count()).sum()
    }

    /// `Left(𝓛 𝓔^T 𝓤)` accumulated pivot by pivot.
    pub fn reconstruct(&self) -> DenseMatrix {
        let f = self.field;
        let n = self.n;
        let mut out = DenseMatrix::zeros(f, n, n);
        for p in &self.pivots {
            for (ti, &l) in p.lower.iter().enumerate() {
                if l == 0 {
                    continue;
                }
                let i = p.row + ti;
                // columns j with j <= n - 2 - i, inside the upper segment
                let last = n - 2 - i;
                for (tj, &u) in p.upper[..=last - p.col].iter().enumerate() {
                    let j = p.col + tj;
                    let v = f.mul_add(l, u, out.get(i, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Computes the Bruhat generator of `Left(A)`.
///
/// Recursion on quadrants: the pivots of the leading quadrant take their 𝓛
/// column from `P1 [L1; M1]` stacked on `C1 U1^{-1}`, and their 𝓤 row from
/// `[U1 V1] Q1` followed by `L1^{-1} B1`; the two off-diagonal remainders
/// recurse and contribute disjoint segments.
pub fn lt_bruhat(a: &DenseMatrix, counter: &mut OpCounter) -> Result<BruhatGenerator> {
    let left = left_part(a)?;
    let n = a.rows();
    if n < 2 {
        return Ok(BruhatGenerator {
            n,
            field: a.field(),
            pivots: Vec::new(),
        });
    }
    let size = n.next_power_of_two();
    let work = if size == n { left } else { left.embed(size, 0, 0) };
    let mut pivots = lt_bruhat_rec(&work, counter);
    // back to the n x n triangle: drop pivots outside it, truncate segments
    pivots.retain(|p| p.row + p.col + 2 <= n);
    for p in pivots.iter_mut() {
        let len = n - 1 - p.row - p.col;
        p.lower.truncate(len);
        p.upper.truncate(len);
    }
    pivots.sort_by_key(|p| p.row);
    Ok(BruhatGenerator {
        n,
        field: a.field(),
        pivots,
    })
}

fn lt_bruhat_rec(a: &DenseMatrix, counter: &mut OpCounter) -> Vec<BruhatPivot> {
    let m = a.rows();
    if m == 1 {
        return Vec::new();
    }
    let h = m / 2;
    let split = eliminate_leading_quadrant(a, counter);
    let d = &split.pluq;
    let pl = d.pl();
    let uq = d.uq();
    let mut out = Vec::new();
    for k in 0..d.rank() {
        let (row, col) = (d.p.apply(k), d.q.apply(k));
        let len = m - 1 - row - col;
        let mut lower = vec![0; len];
        for (t, v) in lower.iter_mut().enumerate() {
            let i = row + t;
            *v = if i < h { pl.get(i, k) } else { split.e.get(i - h, k) };
        }
        let mut upper = vec![0; len];
        for (t, v) in upper.iter_mut().enumerate() {
            let j = col + t;
            *v = if j < h { uq.get(k, j) } else { split.d.get(k, j - h) };
        }
        out.push(BruhatPivot { row, col, lower, upper });
    }
    for mut p in lt_bruhat_rec(&split.h, counter) {
        p.col += h;
        out.push(p);
    }
    for mut p in lt_bruhat_rec(&split.i, counter) {
        p.row += h;
        out.push(p);
    }
    out
}
