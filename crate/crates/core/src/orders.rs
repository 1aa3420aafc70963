//! Quasiseparable orders through the left triangular part of the rank
//! profile matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::OpCounter;
use crate::matrix::{
    mat_mul_sub, rank, reverse_cols, reverse_rows, strict_lower, strict_upper, trsm_unit_lower,
    trsm_upper_right, DenseMatrix,
};
use crate::pluq::{pluq_rpm, rpm_bruteforce, RankProfileMatrix};

/// Quasiseparable orders `(r_L, r_U)` of a square matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct QsOrders {
    pub lower: usize,
    pub upper: usize,
}

impl QsOrders {
    pub fn max(&self) -> usize {
        self.lower.max(self.upper)
    }
}

/// A square matrix whose nonzeros all satisfy `i + j <= n - 2` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftTriangularMatrix(DenseMatrix);

impl LeftTriangularMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        m.check_left_triangular()?;
        Ok(LeftTriangularMatrix(m))
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }
}

/// Largest number of pivots inside a leading `k x (n - k)` block, by a
/// single sweep over row and column flags.
pub fn qs_order(pivots: &[(usize, usize)], n: usize) -> usize {
    let mut rows = vec![false; n];
    let mut cols = vec![false; n];
    for &(i, j) in pivots {
        rows[i] = true;
        cols[j] = true;
    }
    let (mut s, mut r) = (0usize, 0isize);
    for i in 0..n {
        if rows[i] {
            r += 1;
        }
        if cols[n - 1 - i] {
            r -= 1;
        }
        s = s.max(r as usize);
    }
    s
}

/// Left triangular part of the rank profile matrix of a square matrix.
///
/// The input is zero padded to the next power of two, then split
/// recursively: the leading quadrant is factored by [`pluq_rpm`], its
/// pivots are eliminated from the two off-diagonal quadrants, and both
/// Schur-complement-like remainders recurse.
pub fn lt_rpm(a: &DenseMatrix, counter: &mut OpCounter) -> Result<RankProfileMatrix> {
    lt_rpm_with_crossover(a, 1, counter)
}

/// [`lt_rpm`] switching to the dense oracle for blocks of size at most
/// `crossover`.
pub fn lt_rpm_with_crossover(a: &DenseMatrix, crossover: usize, counter: &mut OpCounter) -> Result<RankProfileMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let size = n.next_power_of_two();
    let padded;
    let work = if size == n {
        a
    } else {
        padded = a.embed(size, 0, 0);
        &padded
    };
    let mut pivots = Vec::new();
    lt_rpm_rec(work, 0, 0, crossover.max(1), counter, &mut pivots);
    pivots.retain(|&(i, j)| i + j + 2 <= n);
    RankProfileMatrix::new(n, n, pivots)
}

fn lt_rpm_rec(
    a: &DenseMatrix,
    row_off: usize,
    col_off: usize,
    crossover: usize,
    counter: &mut OpCounter,
    out: &mut Vec<(usize, usize)>,
) {
    let n = a.rows();
    if n <= crossover {
        if n > 1 {
            out.extend(
                rpm_bruteforce(a)
                    .left_part()
                    .pivots()
                    .iter()
                    .map(|&(i, j)| (i + row_off, j + col_off)),
            );
        }
        return;
    }
    let h = n / 2;
    let split = eliminate_leading_quadrant(a, counter);
    let d = &split.pluq;
    out.extend((0..d.rank()).map(|k| (d.p.apply(k) + row_off, d.q.apply(k) + col_off)));
    lt_rpm_rec(&split.h, row_off, col_off + h, crossover, counter, out);
    lt_rpm_rec(&split.i, row_off + h, col_off, crossover, counter, out);
}

/// One step of the quadrant recursion shared by the left triangular RPM and
/// the Bruhat generator.
pub(crate) struct QuadrantSplit {
    pub pluq: crate::pluq::PluqDecomposition,
    /// `L1^{-1} B1`
    pub d: DenseMatrix,
    /// `C1 U1^{-1}`
    pub e: DenseMatrix,
    /// `P1 [0; F]`
    pub h: DenseMatrix,
    /// `[0 G] Q1`
    pub i: DenseMatrix,
}

pub(crate) fn eliminate_leading_quadrant(a: &DenseMatrix, counter: &mut OpCounter) -> QuadrantSplit {
    let f = a.field();
    let n = a.rows();
    let h = n / 2;
    let a1 = a.submatrix(0, h, 0, h);
    let a2 = a.submatrix(0, h, h, n);
    let a3 = a.submatrix(h, n, 0, h);
    let d = pluq_rpm(&a1, counter);
    let r1 = d.rank();

    let b = a2.permute_rows_inv(&d.p);
    let b1 = b.submatrix(0, r1, 0, h);
    let b2 = b.submatrix(r1, h, 0, h);
    let c = a3.permute_cols_inv(&d.q);
    let c1 = c.submatrix(0, h, 0, r1);
    let c2 = c.submatrix(0, h, r1, h);

    let dd = trsm_unit_lower(&d.l1(), &b1, counter).expect("L1 is unit lower triangular");
    let e = trsm_upper_right(&c1, &d.u1(), counter).expect("U1 is invertible");
    let ff = mat_mul_sub(&b2, &d.m1(), &dd, counter).expect("shapes agree");
    let g = mat_mul_sub(&c2, &e, &d.v1(), counter).expect("shapes agree");

    let mut hm = DenseMatrix::zeros(f, h, h);
    hm.set_block(r1, 0, &ff);
    let hm = hm.permute_rows(&d.p);
    let mut im = DenseMatrix::zeros(f, h, h);
    im.set_block(0, r1, &g);
    let im = im.permute_cols(&d.q);
    QuadrantSplit {
        pluq: d,
        d: dd,
        e,
        h: hm,
        i: im,
    }
}

/// `(r_L, r_U)` from the left triangular matrices `J_n * strictlower(M)`
/// and `strictupper(M) * J_n`.
pub fn quasiseparable_orders(m: &DenseMatrix, counter: &mut OpCounter) -> Result<QsOrders> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let lower = lt_rpm(&lower_left_triangular(m), counter)?;
    let upper = lt_rpm(&upper_left_triangular(m), counter)?;
    Ok(QsOrders {
        lower: qs_order(lower.pivots(), n),
        upper: qs_order(upper.pivots(), n),
    })
}

/// `J_n * strictlower(M)`.
pub fn lower_left_triangular(m: &DenseMatrix) -> DenseMatrix {
    reverse_rows(&strict_lower(m))
}

/// `strictupper(M) * J_n`.
pub fn upper_left_triangular(m: &DenseMatrix) -> DenseMatrix {
    reverse_cols(&strict_upper(m))
}

/// Oracle: `max_k rank(A[0..k, 0..n-k])` with dense ranks.
pub fn qs_order_bruteforce(a: &DenseMatrix) -> usize {
    let n = a.rows();
    (1..n).map(|k| rank(&a.submatrix(0, k, 0, n - k))).max().unwrap_or(0)
}

/// Oracle for both orders straight from the definition.
pub fn quasiseparable_orders_bruteforce(m: &DenseMatrix) -> QsOrders {
    let n = m.rows();
    let lower = (1..n).map(|k| rank(&m.submatrix(k, n, 0, k))).max().unwrap_or(0);
    let upper = (1..n).map(|k| rank(&m.submatrix(0, k, k, n))).max().unwrap_or(0);
    QsOrders { lower, upper }
}
