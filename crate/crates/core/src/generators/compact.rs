//! Block compression of the Bruhat generator.
//!
//! The stored columns of 𝓛 are sorted by leading row into an `n x r`
//! echelon matrix `C`, cut into column blocks of width `s`. Column tails
//! that reach past the sub-diagonal block are moved into zero columns of the
//! next block column, so that `C = D + S T` with `D` block diagonal, `S`
//! block sub-diagonal and `T` a 0/1 assignment map. The upper factor is
//! handled the same way through `𝓤^T`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::generators::bruhat::{BruhatGenerator, BruhatPivot};
use crate::matrix::{left_part_unchecked, mat_mul, DenseMatrix};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactEchelon {
    n: usize,
    field: PrimeField,
    s: usize,
    rank: usize,
    /// Column `c` of the sparse factor becomes echelon column `perm(c)`.
    perm: Permutation,
    block_rows: Vec<usize>,
    diag: Vec<DenseMatrix>,
    /// `sub[b - 1]` is the block of rows `b`, columns `b - 1`.
    sub: Vec<DenseMatrix>,
    /// Column `k` of `S` feeds echelon column `t_map[k]`.
    t_map: Vec<usize>,
}

fn block_count(r: usize, s: usize) -> usize {
    if r == 0 {
        1
    } else {
        r.div_ceil(s)
    }
}

fn block_width(r: usize, s: usize, b: usize) -> usize {
    r.saturating_sub(b * s).min(s)
}

impl CompactEchelon {
    /// Assembles and validates the parts of a compressed echelon form.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n: usize,
        field: PrimeField,
        s: usize,
        perm: Permutation,
        block_rows: Vec<usize>,
        diag: Vec<DenseMatrix>,
        sub: Vec<DenseMatrix>,
        t_map: Vec<usize>,
    ) -> Result<Self> {
        let r = t_map.len();
        if r > 0 && s == 0 {
            return Err(Error::InvalidGenerator("zero block width"));
        }
        let t = block_count(r, s);
        if perm.len() != n || r > n {
            return Err(Error::InvalidGenerator("permutation size"));
        }
        if block_rows.len() != t || diag.len() != t || sub.len() != t - 1 {
            return Err(Error::InvalidGenerator("block count"));
        }
        if block_rows.iter().sum::<usize>() != n {
            return Err(Error::InvalidGenerator("block rows do not cover n"));
        }
        for b in 0..t {
            let d = &diag[b];
            if d.field() != field || d.rows() != block_rows[b] || d.cols() != block_width(r, s, b) {
                return Err(Error::InvalidGenerator("diagonal block shape"));
            }
            if b > 0 {
                let sb = &sub[b - 1];
                if sb.field() != field || sb.rows() != block_rows[b] || sb.cols() != block_width(r, s, b - 1) {
                    return Err(Error::InvalidGenerator("sub-diagonal block shape"));
                }
            }
        }
        if t_map.iter().any(|&j| j >= r) {
            return Err(Error::InvalidGenerator("assignment map out of range"));
        }
        Ok(CompactEchelon {
            n,
            field,
            s,
            rank: r,
            perm,
            block_rows,
            diag,
            sub,
            t_map,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn block_width(&self) -> usize {
        self.s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> usize {
        self.block_rows.len()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn block_rows(&self) -> &[usize] {
        &self.block_rows
    }

    pub fn diag_blocks(&self) -> &[DenseMatrix] {
        &self.diag
    }

    pub fn sub_blocks(&self) -> &[DenseMatrix] {
        &self.sub
    }

    pub fn t_map(&self) -> &[usize] {
        &self.t_map
    }

    /// `T` as a dense `r x r` 0/1 matrix.
    pub fn t_dense(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.field, self.rank, self.rank);
        for (k, &j) in self.t_map.iter().enumerate() {
            t.set(k, j, 1);
        }
        t
    }

    /// `D` as a dense `n x r` block diagonal matrix.
    pub fn d_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field, self.n, self.rank);
        let mut r0 = 0;
        for (b, d) in self.diag.iter().enumerate() {
            out.set_block(r0, b * self.s, d);
            r0 += self.block_rows[b];
        }
        out
    }

    /// `S` as a dense `n x r` block sub-diagonal matrix.
    pub fn s_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field, self.n, self.rank);
        let mut r0 = self.block_rows.first().copied().unwrap_or(0);
        for (b, sb) in self.sub.iter().enumerate() {
            out.set_block(r0, b * self.s, sb);
            r0 += self.block_rows[b + 1];
        }
        out
    }

    /// The echelon matrix `C = D + S T`.
    ///
    /// The supports of `D` and of the columns of `S` sent to one column are
    /// disjoint, so this is pure data movement.
    pub fn echelon(&self) -> DenseMatrix {
        let mut c = self.d_dense();
        let mut r0 = self.block_rows.first().copied().unwrap_or(0);
        for (b, sb) in self.sub.iter().enumerate() {
            for i in 0..sb.rows() {
                for k in 0..sb.cols() {
                    let v = sb.get(i, k);
                    if v != 0 {
                        let j = self.t_map[b * self.s + k];
                        c.set(r0 + i, j, v);
                    }
                }
            }
            r0 += self.block_rows[b + 1];
        }
        c
    }

    pub fn stored_elems(&self) -> usize {
        let d: usize = self.diag.iter().map(|m| m.rows() * m.cols()).sum();
        let s: usize = self.sub.iter().map(|m| m.rows() * m.cols()).sum();
        d + s
    }
}

/// Compresses a list of column segments `(lead_row, column, values)`.
fn compress_segments(
    n: usize,
    field: PrimeField,
    mut segs: Vec<(usize, usize, &[u64])>,
    s: usize,
) -> Result<CompactEchelon> {
    let r = segs.len();
    if r > 0 && s == 0 {
        return Err(Error::BlockWidthTooSmall { width: s, needed: 1 });
    }
    segs.sort_by_key(|&(lead, _, _)| lead);
    let mut image = vec![usize::MAX; n];
    for (q, &(_, col, _)) in segs.iter().enumerate() {
        image[col] = q;
    }
    for (v, next) in image.iter_mut().filter(|v| **v == usize::MAX).zip(r..) {
        *v = next;
    }
    let perm = Permutation::from_image(image)?;

    let mut c = DenseMatrix::zeros(field, n, r);
    for (q, &(lead, _, vals)) in segs.iter().enumerate() {
        for (t, &v) in vals.iter().enumerate() {
            c.set(lead + t, q, v);
        }
    }

    let t = block_count(r, s);
    let mut starts = Vec::with_capacity(t + 1);
    starts.push(0);
    starts.extend((1..t).map(|b| segs[b * s].0));
    starts.push(n);
    let cols_of = |b: usize| b * s..b * s + block_width(r, s, b);
    let tail_is_zero = |c: &DenseMatrix, j: usize, from: usize| (from..n).all(|i| c.get(i, j) == 0);

    let mut t_map: Vec<usize> = (0..r).collect();
    for (b, &start) in starts.iter().enumerate().take(t).skip(2) {
        for j in cols_of(b - 2) {
            if tail_is_zero(&c, j, start) {
                continue;
            }
            let k = cols_of(b - 1)
                .find(|&k| tail_is_zero(&c, k, start))
                .ok_or(Error::NoZeroColumn { block: b })?;
            for i in start..n {
                let v = c.get(i, j);
                c.set(i, k, v);
                c.set(i, j, 0);
            }
            t_map[k] = t_map[j];
        }
    }

    let mut block_rows = Vec::with_capacity(t);
    let mut diag = Vec::with_capacity(t);
    let mut sub = Vec::with_capacity(t.saturating_sub(1));
    for b in 0..t {
        let (r0, r1) = (starts[b], starts[b + 1]);
        block_rows.push(r1 - r0);
        let cb = cols_of(b);
        diag.push(c.submatrix(r0, r1, cb.start, cb.end));
        if b > 0 {
            let cp = cols_of(b - 1);
            sub.push(c.submatrix(r0, r1, cp.start, cp.end));
        }
        // everything below the sub-diagonal block must be gone by now
        debug_assert!(cb.clone().all(|j| tail_is_zero(&c, j, starts[(b + 2).min(t)])));
    }
    CompactEchelon::from_parts(n, field, s, perm, block_rows, diag, sub, t_map)
}

/// Compresses the lower factor 𝓛 of a Bruhat generator with block width `s`.
///
/// `s` must bound the quasiseparable order of the represented matrix;
/// otherwise the compression may run out of zero columns.
pub fn compress_echelon(g: &BruhatGenerator, s: usize) -> Result<CompactEchelon> {
    let segs = g.pivots().iter().map(|p| (p.row, p.col, p.lower.as_slice())).collect();
    compress_segments(g.n(), g.field(), segs, s)
}

/// Compresses `𝓤^T`, the upper factor seen column-wise.
pub fn compress_echelon_transposed(g: &BruhatGenerator, s: usize) -> Result<CompactEchelon> {
    let segs = g.pivots().iter().map(|p| (p.col, p.row, p.upper.as_slice())).collect();
    compress_segments(g.n(), g.field(), segs, s)
}

/// `[D + S T | 0] 𝓠^T`, the sparse factor in dense form.
pub fn decompress_echelon(c: &CompactEchelon) -> DenseMatrix {
    let ech = c.echelon();
    let mut out = DenseMatrix::zeros(c.field, c.n, c.n);
    for col in 0..c.n {
        let q = c.perm.apply(col);
        if q < c.rank {
            for i in 0..c.n {
                out.set(i, col, ech.get(i, q));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactBruhatGenerator {
    lower: CompactEchelon,
    /// Compressed `𝓤^T`.
    upper: CompactEchelon,
    /// Echelon column `q` of the lower side pairs with column `r(q)` of the upper side.
    r: Permutation,
}

fn lead(c: &DenseMatrix, q: usize) -> Option<usize> {
    (0..c.rows()).find(|&i| c.get(i, q) != 0)
}

impl CompactBruhatGenerator {
    pub fn from_parts(lower: CompactEchelon, upper: CompactEchelon, r: Permutation) -> Result<Self> {
        if lower.n != upper.n || lower.field != upper.field || lower.rank != upper.rank || r.len() != lower.rank {
            return Err(Error::InvalidGenerator("compact halves disagree"));
        }
        let g = CompactBruhatGenerator { lower, upper, r };
        g.to_bruhat()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.lower.n
    }

    pub fn field(&self) -> PrimeField {
        self.lower.field
    }

    pub fn rank(&self) -> usize {
        self.lower.rank
    }

    pub fn block_width(&self) -> usize {
        self.lower.s
    }

    pub fn lower(&self) -> &CompactEchelon {
        &self.lower
    }

    pub fn upper(&self) -> &CompactEchelon {
        &self.upper
    }

    pub fn r(&self) -> &Permutation {
        &self.r
    }

    pub fn stored_elems(&self) -> usize {
        self.lower.stored_elems() + self.upper.stored_elems()
    }

    /// `Left(C_L R C_U^T)`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let cl = self.lower.echelon().permute_cols(&self.r);
        let cu = self.upper.echelon();
        let prod = mat_mul(&cl, &cu.transpose(), &mut OpCounter::new()).expect("shapes agree");
        left_part_unchecked(&prod)
    }

    /// Recovers the uncompressed Bruhat generator.
    pub fn to_bruhat(&self) -> Result<BruhatGenerator> {
        let n = self.n();
        let cl = self.lower.echelon();
        let cu = self.upper.echelon();
        let linv = self.lower.perm.inverse();
        let uinv = self.upper.perm.inverse();
        let bad = Error::InvalidGenerator("inconsistent compact generator");
        let mut pivots = Vec::with_capacity(self.rank());
        for q in 0..self.rank() {
            let q2 = self.r.apply(q);
            let (col, row) = (linv.apply(q), uinv.apply(q2));
            if lead(&cl, q) != Some(row) || lead(&cu, q2) != Some(col) || row + col + 2 > n {
                return Err(bad);
            }
            let len = n - 1 - row - col;
            if (row + len..n).any(|i| cl.get(i, q) != 0) || (col + len..n).any(|j| cu.get(j, q2) != 0) {
                return Err(bad);
            }
            pivots.push(BruhatPivot {
                row,
                col,
                lower: (row..row + len).map(|i| cl.get(i, q)).collect(),
                upper: (col..col + len).map(|j| cu.get(j, q2)).collect(),
            });
        }
        BruhatGenerator::new(n, self.field(), pivots)
    }
}

/// Compact Bruhat generator with block width `s`.
pub fn compact_bruhat(g: &BruhatGenerator, s: usize) -> Result<CompactBruhatGenerator> {
    let lower = compress_echelon(g, s)?;
    let upper = compress_echelon_transposed(g, s)?;
    let mut image = vec![0; g.rank()];
    for p in g.pivots() {
        image[lower.perm.apply(p.col)] = upper.perm.apply(p.row);
    }
    let r = Permutation::from_image(image)?;
    Ok(CompactBruhatGenerator { lower, upper, r })
}
