//! Rank profile revealing PLUQ decomposition and the rank profile matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::matrix::{mat_mul, DenseMatrix};
use crate::perm::Permutation;

/// The pivot positions of a rank profile matrix, sorted by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankProfileMatrix {
    rows: usize,
    cols: usize,
    pivots: Vec<(usize, usize)>,
}

impl RankProfileMatrix {
    /// Validates that pivots are in range and on distinct rows and columns.
    pub fn new(rows: usize, cols: usize, mut pivots: Vec<(usize, usize)>) -> Result<Self> {
        pivots.sort_unstable();
        let mut used_cols = vec![false; cols];
        for (k, &(i, j)) in pivots.iter().enumerate() {
            if i >= rows || j >= cols || used_cols[j] || (k > 0 && pivots[k - 1].0 == i) {
                return Err(Error::InvalidGenerator("pivots must lie on distinct rows and columns"));
            }
            used_cols[j] = true;
        }
        Ok(RankProfileMatrix { rows, cols, pivots })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        RankProfileMatrix {
            rows,
            cols,
            pivots: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[(usize, usize)] {
        &self.pivots
    }

    /// Pivots strictly above the anti-diagonal of a square matrix.
    pub fn left_part(&self) -> Self {
        let n = self.cols;
        RankProfileMatrix {
            rows: self.rows,
            cols: self.cols,
            pivots: self.pivots.iter().copied().filter(|&(i, j)| i + j + 2 <= n).collect(),
        }
    }

    pub fn to_dense(&self, field: PrimeField) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(field, self.rows, self.cols);
        for &(i, j) in &self.pivots {
            m.set(i, j, 1);
        }
        m
    }
}

/// `A = P * L * U * Q` with `L` unit lower trapezoidal (`m x r`) and `U`
/// upper trapezoidal (`r x n`) with nonzero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluqDecomposition {
    pub p: Permutation,
    pub l: DenseMatrix,
    pub u: DenseMatrix,
    pub q: Permutation,
}

impl PluqDecomposition {
    pub fn rank(&self) -> usize {
        self.l.cols()
    }

    pub fn rows(&self) -> usize {
        self.l.rows()
    }

    pub fn cols(&self) -> usize {
        self.u.cols()
    }

    pub fn field(&self) -> PrimeField {
        self.l.field()
    }

    /// Leading `r x r` block of `L`.
    pub fn l1(&self) -> DenseMatrix {
        let r = self.rank();
        self.l.submatrix(0, r, 0, r)
    }

    /// Trailing `(m - r) x r` block of `L`.
    pub fn m1(&self) -> DenseMatrix {
        let r = self.rank();
        self.l.submatrix(r, self.rows(), 0, r)
    }

    /// Leading `r x r` block of `U`.
    pub fn u1(&self) -> DenseMatrix {
        let r = self.rank();
        self.u.submatrix(0, r, 0, r)
    }

    /// Trailing `r x (n - r)` block of `U`.
    pub fn v1(&self) -> DenseMatrix {
        let r = self.rank();
        self.u.submatrix(0, r, r, self.cols())
    }

    /// `P * L`, an `m x r` matrix.
    pub fn pl(&self) -> DenseMatrix {
        self.l.permute_rows(&self.p)
    }

    /// `U * Q`, an `r x n` matrix.
    pub fn uq(&self) -> DenseMatrix {
        self.u.permute_cols(&self.q)
    }

    pub fn reconstruct(&self, counter: &mut OpCounter) -> DenseMatrix {
        let lu = mat_mul(&self.l, &self.u, counter).expect("consistent factor shapes");
        lu.permute_rows(&self.p).permute_cols(&self.q)
    }

    /// Field elements needed for the trapezoidal factors, unit diagonal
    /// excluded: `(m + n) r - r^2`.
    pub fn stored_elems(&self) -> usize {
        let r = self.rank();
        (self.rows() + self.cols()) * r - r * r
    }

    /// Shape checks: unit diagonal of `L`, nonzero diagonal of `U`, zero
    /// entries outside the trapezoids.
    pub fn validate(&self) -> Result<()> {
        let r = self.rank();
        if self.u.rows() != r || self.p.len() != self.rows() || self.q.len() != self.cols() {
            return Err(Error::InvalidGenerator("inconsistent PLUQ dimensions"));
        }
        for k in 0..r {
            if self.l.get(k, k) != 1 {
                return Err(Error::NonUnitDiagonal { index: k });
            }
            if self.u.get(k, k) == 0 {
                return Err(Error::Singular { index: k });
            }
            if (0..k).any(|i| self.l.get(i, k) != 0) || (0..k).any(|j| self.u.get(k, j) != 0) {
                return Err(Error::InvalidGenerator("PLUQ factors are not trapezoidal"));
            }
        }
        Ok(())
    }
}

/// Gaussian elimination revealing the rank profile matrix.
///
/// The k-th pivot is the first nonzero of the remaining block in row-major
/// order. It is brought to position `(k, k)` by a cyclic shift of rows
/// `k..=i` and of columns `k..=j`, so non-pivot rows and columns keep their
/// relative order.
pub fn pluq_rpm(a: &DenseMatrix, counter: &mut OpCounter) -> PluqDecomposition {
    let f = a.field();
    let (m, n) = (a.rows(), a.cols());
    let mut w: Vec<u64> = a.as_slice().to_vec();
    let mut rowperm: Vec<usize> = (0..m).collect();
    let mut colperm: Vec<usize> = (0..n).collect();
    let mut k = 0;
    while k < m.min(n) {
        let found = (k..m).find_map(|i| {
            w[i * n + k..(i + 1) * n]
                .iter()
                .position(|&x| x != 0)
                .map(|dj| (i, k + dj))
        });
        let Some((pi, pj)) = found else { break };
        if pi > k {
            w[k * n..(pi + 1) * n].rotate_right(n);
            rowperm[k..=pi].rotate_right(1);
        }
        if pj > k {
            for row in w.chunks_exact_mut(n) {
                row[k..=pj].rotate_right(1);
            }
            colperm[k..=pj].rotate_right(1);
        }
        let inv = f.inv(w[k * n + k]).expect("pivot is nonzero");
        counter.record(0, 0, 1);
        let (top, bottom) = w.split_at_mut((k + 1) * n);
        let pivot_row = &top[k * n..];
        for row in bottom.chunks_exact_mut(n) {
            if row[k] == 0 {
                continue;
            }
            let l = f.mul(row[k], inv);
            row[k] = l;
            for (x, &pv) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                *x = f.sub(*x, f.mul(l, pv));
            }
            let width = (n - k - 1) as u64;
            counter.record(width, width + 1, 0);
        }
        k += 1;
    }
    let r = k;
    let mut l = DenseMatrix::zeros(f, m, r);
    for i in 0..m {
        for c in 0..r.min(i + 1) {
            l.set(i, c, if c == i { 1 } else { w[i * n + c] });
        }
    }
    let mut u = DenseMatrix::zeros(f, r, n);
    for i in 0..r {
        u.row_mut(i)[i..].copy_from_slice(&w[i * n + i..(i + 1) * n]);
    }
    PluqDecomposition {
        p: Permutation::from_image(rowperm).expect("rotations preserve bijectivity"),
        l,
        u,
        q: Permutation::from_image(colperm).expect("rotations preserve bijectivity"),
    }
}

/// `P [I_r 0; 0 0] Q`: pivot `k` sits at `(P(k), Q(k))`.
pub fn rpm_from_pluq(d: &PluqDecomposition) -> RankProfileMatrix {
    let mut pivots: Vec<(usize, usize)> = (0..d.rank()).map(|k| (d.p.apply(k), d.q.apply(k))).collect();
    pivots.sort_unstable();
    RankProfileMatrix {
        rows: d.rows(),
        cols: d.cols(),
        pivots,
    }
}

/// Table of `rank(A[0..i, 0..j])` for `0 <= i <= m`, `0 <= j <= n`, stored
/// row-major with stride `n + 1`.
///
/// Each column prefix is processed by inserting rows one at a time into a
/// reduced echelon basis.
pub fn leading_ranks(a: &DenseMatrix) -> Vec<usize> {
    let f = a.field();
    let (m, n) = (a.rows(), a.cols());
    let mut table = vec![0usize; (m + 1) * (n + 1)];
    for j in 1..=n {
        // basis rows kept sorted by leading column, normalized to a leading 1
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for i in 1..=m {
            let mut v = a.row(i - 1)[..j].to_vec();
            for (lead, b) in &basis {
                let c = v[*lead];
                if c != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
            if let Some(lead) = v.iter().position(|&x| x != 0) {
                let inv = f.inv(v[lead]).expect("nonzero");
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                let at = basis.partition_point(|(l, _)| *l < lead);
                basis.insert(at, (lead, v));
            }
            table[i * (n + 1) + j] = basis.len();
        }
    }
    table
}

/// Rank profile matrix from leading sub-matrix ranks: `(i, j)` is a pivot
/// iff the inclusion-exclusion of the four surrounding leading ranks is 1.
pub fn rpm_bruteforce(a: &DenseMatrix) -> RankProfileMatrix {
    let (m, n) = (a.rows(), a.cols());
    let t = leading_ranks(a);
    let r = |i: usize, j: usize| t[i * (n + 1) + j] as isize;
    let mut pivots = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            if r(i, j) - r(i - 1, j) - r(i, j - 1) + r(i - 1, j - 1) == 1 {
                pivots.push((i - 1, j - 1));
            }
        }
    }
    RankProfileMatrix { rows: m, cols: n, pivots }
}

/// `P [L | 0] P^T` is lower triangular and `Q^T [U; 0] Q` is upper
/// triangular.
pub fn check_theorem1(d: &PluqDecomposition) -> bool {
    let r = d.rank();
    for a in 0..d.rows() {
        for b in 0..r {
            if d.l.get(a, b) != 0 && d.p.apply(a) < d.p.apply(b) {
                return false;
            }
        }
    }
    for a in 0..r {
        for b in 0..d.cols() {
            if d.u.get(a, b) != 0 && d.q.apply(a) > d.q.apply(b) {
                return false;
            }
        }
    }
    true
}
