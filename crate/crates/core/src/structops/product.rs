//! Products involving tree generators and quasiseparable matrices.
//!
//! All routines work on the padded square of the tree; the public wrappers
//! embed their dense operands at the generator's placement and crop the
//! result.

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::generators::qs::{qs_placements, QsMatrix};
use crate::generators::tree::{Placement, TreeGenerator, TreeNode};
use crate::matrix::{mat_mul, reverse_cols, reverse_rows, DenseMatrix};
use crate::pluq::PluqDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MulMode {
    /// `A B`
    Direct,
    /// `A J B`
    MiddleReversed,
}

fn mul(a: &DenseMatrix, b: &DenseMatrix, counter: &mut OpCounter) -> DenseMatrix {
    mat_mul(a, b, counter).expect("shapes agree")
}

/// `F A` for a dense left triangular `A`, touching only its support.
fn flat_times_leaf(f: &DenseMatrix, a: &DenseMatrix, counter: &mut OpCounter) -> DenseMatrix {
    let fld = f.field();
    let m = a.rows();
    let mut out = DenseMatrix::zeros(fld, f.rows(), m);
    let mut terms = 0u64;
    for i in 0..m {
        for j in 0..(m - 1).saturating_sub(i) {
            let v = a.get(i, j);
            for r in 0..f.rows() {
                let acc = fld.mul_add(f.get(r, i), v, out.get(r, j));
                out.set(r, j, acc);
            }
            terms += 1;
        }
    }
    record_sums(counter, f.rows() as u64, terms, m as u64);
    out
}

/// `A X` for a dense left triangular `A`.
fn leaf_times_tall(a: &DenseMatrix, x: &DenseMatrix, counter: &mut OpCounter) -> DenseMatrix {
    flat_times_leaf(&x.transpose(), &a.transpose(), counter).transpose()
}

/// Records `lines * terms` products folded into `lines * outputs` sums.
fn record_sums(counter: &mut OpCounter, lines: u64, terms: u64, outputs: u64) {
    counter.record(lines * terms.saturating_sub(outputs), lines * terms, 0);
}

fn flat_node(f: &DenseMatrix, node: &TreeNode, counter: &mut OpCounter) -> DenseMatrix {
    match node {
        TreeNode::Leaf(a) => flat_times_leaf(f, a, counter),
        TreeNode::Node {
            size,
            pluq,
            top_right,
            bottom_left,
        } => {
            let h = size / 2;
            let fa = f.submatrix(0, f.rows(), 0, h);
            let fb = f.submatrix(0, f.rows(), h, *size);
            let mut left = flat_times_pluq(&fa, pluq, counter);
            left.add_block(0, 0, &flat_node(&fb, bottom_left, counter), counter);
            let right = flat_node(&fa, top_right, counter);
            let mut out = DenseMatrix::zeros(f.field(), f.rows(), *size);
            out.set_block(0, 0, &left);
            out.set_block(0, h, &right);
            out
        }
    }
}

fn tall_node(node: &TreeNode, x: &DenseMatrix, counter: &mut OpCounter) -> DenseMatrix {
    match node {
        TreeNode::Leaf(a) => leaf_times_tall(a, x, counter),
        TreeNode::Node {
            size,
            pluq,
            top_right,
            bottom_left,
        } => {
            let h = size / 2;
            let xt = x.submatrix(0, h, 0, x.cols());
            let xb = x.submatrix(h, *size, 0, x.cols());
            let mut top = pluq_times_tall(pluq, &xt, counter);
            top.add_block(0, 0, &tall_node(top_right, &xb, counter), counter);
            let bottom = tall_node(bottom_left, &xt, counter);
            let mut out = DenseMatrix::zeros(x.field(), *size, x.cols());
            out.set_block(0, 0, &top);
            out.set_block(h, 0, &bottom);
            out
        }
    }
}

/// `F P L U Q`.
fn flat_times_pluq(f: &DenseMatrix, d: &PluqDecomposition, counter: &mut OpCounter) -> DenseMatrix {
    if d.rank() == 0 {
        return DenseMatrix::zeros(f.field(), f.rows(), d.cols());
    }
    let fp = f.permute_cols_inv(&d.p);
    mul(&mul(&fp, &d.l, counter), &d.u, counter).permute_cols(&d.q)
}

/// `P L U Q X`.
fn pluq_times_tall(d: &PluqDecomposition, x: &DenseMatrix, counter: &mut OpCounter) -> DenseMatrix {
    if d.rank() == 0 {
        return DenseMatrix::zeros(x.field(), d.rows(), x.cols());
    }
    let qx = x.permute_rows_inv(&d.q);
    mul(&d.l, &mul(&d.u, &qx, counter), counter).permute_rows(&d.p)
}

fn check_field(left: PrimeField, right: PrimeField) -> Result<()> {
    if left != right {
        return Err(Error::FieldMismatch {
            left: left.modulus(),
            right: right.modulus(),
        });
    }
    Ok(())
}

fn check_inner(op: &'static str, left: (usize, usize), right: (usize, usize)) -> Result<()> {
    if left.1 != right.0 {
        return Err(Error::DimensionMismatch { op, left, right });
    }
    Ok(())
}

/// `F A` with `A` the matrix of `g`.
pub fn mul_flat_by_lt(f: &DenseMatrix, g: &TreeGenerator, counter: &mut OpCounter) -> Result<DenseMatrix> {
    check_inner("mul_flat_by_lt", (f.rows(), f.cols()), (g.n(), g.n()))?;
    check_field(f.field(), g.field())?;
    let Placement { row, col } = g.placement();
    let mut big = DenseMatrix::zeros(f.field(), f.rows(), g.size());
    big.set_block(0, row, f);
    let out = flat_node(&big, g.root(), counter);
    Ok(out.submatrix(0, f.rows(), col, col + g.n()))
}

/// `A X` with `A` the matrix of `g`.
pub fn mul_lt_by_tall(g: &TreeGenerator, x: &DenseMatrix, counter: &mut OpCounter) -> Result<DenseMatrix> {
    check_inner("mul_lt_by_tall", (g.n(), g.n()), (x.rows(), x.cols()))?;
    check_field(x.field(), g.field())?;
    let Placement { row, col } = g.placement();
    let mut big = DenseMatrix::zeros(x.field(), g.size(), x.cols());
    big.set_block(col, 0, x);
    let out = tall_node(g.root(), &big, counter);
    Ok(out.submatrix(row, row + g.n(), 0, x.cols()))
}

/// `(P L U Q) A`, through `P (L ((U Q) A))`.
pub fn mul_pluq_by_lt(d: &PluqDecomposition, g: &TreeGenerator, counter: &mut OpCounter) -> Result<DenseMatrix> {
    check_inner("mul_pluq_by_lt", (d.rows(), d.cols()), (g.n(), g.n()))?;
    if d.rank() == 0 {
        return Ok(DenseMatrix::zeros(g.field(), d.rows(), g.n()));
    }
    let w = mul_flat_by_lt(&d.uq(), g, counter)?;
    Ok(mul(&d.l, &w, counter).permute_rows(&d.p))
}

/// `A (P L U Q)`, through `((A (P L)) U) Q`.
pub fn mul_lt_by_pluq(g: &TreeGenerator, d: &PluqDecomposition, counter: &mut OpCounter) -> Result<DenseMatrix> {
    check_inner("mul_lt_by_pluq", (g.n(), g.n()), (d.rows(), d.cols()))?;
    if d.rank() == 0 {
        return Ok(DenseMatrix::zeros(g.field(), g.n(), d.cols()));
    }
    let w = mul_lt_by_tall(g, &d.pl(), counter)?;
    Ok(mul(&w, &d.u, counter).permute_cols(&d.q))
}

fn pluq_flat_node(d: &PluqDecomposition, node: &TreeNode, counter: &mut OpCounter) -> DenseMatrix {
    if d.rank() == 0 {
        return DenseMatrix::zeros(d.field(), d.rows(), node.size());
    }
    mul(&d.l, &flat_node(&d.uq(), node, counter), counter).permute_rows(&d.p)
}

fn node_tall_pluq(node: &TreeNode, d: &PluqDecomposition, counter: &mut OpCounter) -> DenseMatrix {
    if d.rank() == 0 {
        return DenseMatrix::zeros(d.field(), node.size(), d.cols());
    }
    mul(&tall_node(node, &d.pl(), counter), &d.u, counter).permute_cols(&d.q)
}

/// `A J B` for dense left triangular leaves of equal size.
fn dense_lt_product(a: &DenseMatrix, b: &DenseMatrix, mode: MulMode, counter: &mut OpCounter) -> DenseMatrix {
    let b = match mode {
        MulMode::Direct => b.clone(),
        MulMode::MiddleReversed => reverse_rows(b),
    };
    let m = a.rows();
    let fld = a.field();
    let mut out = DenseMatrix::zeros(fld, m, b.cols());
    let mut muls = 0u64;
    for i in 0..m {
        for k in 0..(m - 1).saturating_sub(i) {
            let v = a.get(i, k);
            for j in 0..b.cols() {
                out.set(i, j, fld.mul_add(v, b.get(k, j), out.get(i, j)));
                muls += 1;
            }
        }
    }
    counter.record(muls, muls, 0);
    out
}

fn lt_lt_node(a: &TreeNode, b: &TreeNode, mode: MulMode, counter: &mut OpCounter) -> DenseMatrix {
    let (
        TreeNode::Node {
            size,
            pluq: a1,
            top_right: a2,
            bottom_left: a3,
        },
        TreeNode::Node {
            pluq: b1,
            top_right: b2,
            bottom_left: b3,
            ..
        },
    ) = (a, b)
    else {
        let (da, db) = (a.to_dense(), b.to_dense());
        return dense_lt_product(&da, &db, mode, counter);
    };
    let n = *size;
    let h = n / 2;
    let fld = a1.field();
    let mut out = DenseMatrix::zeros(fld, n, n);
    match mode {
        MulMode::Direct => {
            // [A1 B1 + A2 B3, A1 B2; A3 B1, A3 B2]
            let mut tl = pluq_pluq(a1, b1, counter);
            tl.add_block(0, 0, &lt_lt_node(a2, b3, mode, counter), counter);
            out.set_block(0, 0, &tl);
            out.set_block(0, h, &pluq_flat_node(a1, b2, counter));
            out.set_block(h, 0, &node_tall_pluq(a3, b1, counter));
            out.set_block(h, h, &lt_lt_node(a3, b2, mode, counter));
        }
        MulMode::MiddleReversed => {
            // [A1 J B3 + A2 J B1, A2 J B2; A3 J B3, 0]
            let mut tl = if a1.rank() == 0 {
                DenseMatrix::zeros(fld, h, h)
            } else {
                let w = flat_node(&reverse_cols(&a1.uq()), b3, counter);
                mul(&a1.l, &w, counter).permute_rows(&a1.p)
            };
            if b1.rank() > 0 {
                let w = tall_node(a2, &reverse_rows(&b1.pl()), counter);
                let z = mul(&w, &b1.u, counter).permute_cols(&b1.q);
                tl.add_block(0, 0, &z, counter);
            }
            out.set_block(0, 0, &tl);
            out.set_block(0, h, &lt_lt_node(a2, b2, mode, counter));
            out.set_block(h, 0, &lt_lt_node(a3, b3, mode, counter));
        }
    }
    out
}

/// `(P L U Q)(P' L' U' Q')` through the small core `(U Q)(P' L')`.
fn pluq_pluq(a: &PluqDecomposition, b: &PluqDecomposition, counter: &mut OpCounter) -> DenseMatrix {
    if a.rank() == 0 || b.rank() == 0 {
        return DenseMatrix::zeros(a.field(), a.rows(), b.cols());
    }
    let w = mul(&a.uq(), &b.pl(), counter);
    let lw = mul(&a.l, &w, counter);
    mul(&lw, &b.u, counter).permute_rows(&a.p).permute_cols(&b.q)
}

/// `A B` or `A J B` for two tree generators of the same size.
///
/// The padded products line up when the placements satisfy `ca = rb`
/// (direct) or `ca + rb = N - n` (middle reversed). Otherwise the right
/// operand is re-embedded first; that conversion is not counted.
pub fn mul_lt_lt(
    ga: &TreeGenerator,
    gb: &TreeGenerator,
    mode: MulMode,
    counter: &mut OpCounter,
) -> Result<DenseMatrix> {
    if ga.n() != gb.n() {
        return Err(Error::DimensionMismatch {
            op: "mul_lt_lt",
            left: (ga.n(), ga.n()),
            right: (gb.n(), gb.n()),
        });
    }
    if ga.field() != gb.field() {
        return Err(Error::FieldMismatch {
            left: ga.field().modulus(),
            right: gb.field().modulus(),
        });
    }
    let n = ga.n();
    let size = ga.size();
    let pa = ga.placement();
    let pb = gb.placement();
    let want_row = match mode {
        MulMode::Direct => Some(pa.col),
        MulMode::MiddleReversed => (size - n).checked_sub(pa.col),
    };
    let aligned;
    let (ga, gb) = match want_row {
        Some(r) if r == pb.row => (ga, gb),
        _ => {
            // re-embed both operands at placements that line up
            let (a_place, b_place) = match mode {
                MulMode::Direct => (Placement::default(), Placement::default()),
                MulMode::MiddleReversed => (Placement::default(), Placement { row: size - n, col: 0 }),
            };
            aligned = (retree(ga, a_place), retree(gb, b_place));
            (&aligned.0, &aligned.1)
        }
    };
    let big = lt_lt_node(ga.root(), gb.root(), mode, counter);
    let (row, col) = (ga.placement().row, gb.placement().col);
    Ok(big.submatrix(row, row + n, col, col + n))
}

fn retree(g: &TreeGenerator, placement: Placement) -> TreeGenerator {
    let opts = crate::generators::tree::TreeOptions {
        leaf_size: g.leaf_size(),
        placement,
    };
    crate::generators::tree::tree_generator_with(&g.reconstruct(), opts, &mut OpCounter::new())
        .expect("reconstruction of a tree is left triangular")
}

fn tree_dense_counted(g: &TreeGenerator, counter: &mut OpCounter) -> DenseMatrix {
    fn go(node: &TreeNode, counter: &mut OpCounter) -> DenseMatrix {
        match node {
            TreeNode::Leaf(m) => m.clone(),
            TreeNode::Node {
                size,
                pluq,
                top_right,
                bottom_left,
            } => {
                let h = size / 2;
                let mut out = DenseMatrix::zeros(pluq.field(), *size, *size);
                out.set_block(0, 0, &pluq.reconstruct(counter));
                out.set_block(0, h, &go(top_right, counter));
                out.set_block(h, 0, &go(bottom_left, counter));
                out
            }
        }
    }
    let Placement { row, col } = g.placement();
    go(g.root(), counter).submatrix(row, row + g.n(), col, col + g.n())
}

fn accumulate(acc: &mut DenseMatrix, term: &DenseMatrix, counter: &mut OpCounter) {
    acc.add_block(0, 0, term, counter);
}

/// Dense product of two quasiseparable matrices from their representations.
///
/// With `M = J X_L + D + X_U J` the four products of off-diagonal parts are
/// `J (X_L J X_L')`, `J (X_L X_U') J`, `X_U X_L'` and `(X_U J X_U') J`;
/// the remaining five terms are diagonal scalings. Non-tree parts are turned
/// into trees first, outside the counter.
pub fn mul_qs_qs(a: &QsMatrix, b: &QsMatrix, counter: &mut OpCounter) -> Result<DenseMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            op: "mul_qs_qs",
            left: (a.n(), a.n()),
            right: (b.n(), b.n()),
        });
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            left: a.field().modulus(),
            right: b.field().modulus(),
        });
    }
    let n = a.n();
    let fld: PrimeField = a.field();
    let (pl, pu) = qs_placements(n);
    let (la, ua) = (a.lower().to_tree(pl), a.upper().to_tree(pu));
    let (lb, ub) = (b.lower().to_tree(pl), b.upper().to_tree(pu));

    let mut out = reverse_rows(&mul_lt_lt(&la, &lb, MulMode::MiddleReversed, counter)?);
    accumulate(
        &mut out,
        &reverse_rows(&reverse_cols(&mul_lt_lt(&la, &ub, MulMode::Direct, counter)?)),
        counter,
    );
    accumulate(&mut out, &mul_lt_lt(&ua, &lb, MulMode::Direct, counter)?, counter);
    accumulate(
        &mut out,
        &reverse_cols(&mul_lt_lt(&ua, &ub, MulMode::MiddleReversed, counter)?),
        counter,
    );

    // off-diagonal parts in dense form for the diagonal scalings
    let lad = reverse_rows(&tree_dense_counted(&la, counter));
    let uad = reverse_cols(&tree_dense_counted(&ua, counter));
    let lbd = reverse_rows(&tree_dense_counted(&lb, counter));
    let ubd = reverse_cols(&tree_dense_counted(&ub, counter));
    let mut offb = lbd;
    accumulate(&mut offb, &ubd, counter);
    let mut offa = lad;
    accumulate(&mut offa, &uad, counter);
    accumulate(&mut out, &offb.scale_rows(a.diag(), counter), counter);
    accumulate(&mut out, &offa.scale_cols(b.diag(), counter), counter);
    for i in 0..n {
        let v = fld.mul_add(a.diag()[i], b.diag()[i], out.get(i, i));
        out.set(i, i, v);
    }
    counter.record(n as u64, n as u64, 0);
    Ok(out)
}
