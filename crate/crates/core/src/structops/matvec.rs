//! Matrix-vector products with the structured representations.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::generators::bruhat::BruhatGenerator;
use crate::generators::compact::CompactBruhatGenerator;
use crate::generators::qs::{LtRep, QsMatrix};
use crate::generators::tree::{Placement, TreeGenerator, TreeNode};
use crate::pluq::PluqDecomposition;

fn check_len(expected: usize, x: &[u64]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: x.len(),
        });
    }
    Ok(())
}

/// Running sums `Σ_{t' <= t} 𝓤[r_k][c_k + t'] x[c_k + t']` for every pivot `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTable {
    sums: Vec<Vec<u64>>,
}

impl PrefixTable {
    pub fn new(g: &BruhatGenerator, x: &[u64], counter: &mut OpCounter) -> Result<Self> {
        check_len(g.n(), x)?;
        let f = g.field();
        let mut sums = Vec::with_capacity(g.rank());
        let (mut adds, mut muls) = (0u64, 0u64);
        for p in g.pivots() {
            let mut acc = 0;
            let mut started = false;
            let mut row = Vec::with_capacity(p.upper.len());
            for (t, &u) in p.upper.iter().enumerate() {
                if u != 0 {
                    let prod = f.mul(u, x[p.col + t]);
                    muls += 1;
                    if started {
                        acc = f.add(acc, prod);
                        adds += 1;
                    } else {
                        acc = prod;
                        started = true;
                    }
                }
                row.push(acc);
            }
            sums.push(row);
        }
        counter.record(adds, muls, 0);
        Ok(PrefixTable { sums })
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn table(&self, k: usize) -> &[u64] {
        &self.sums[k]
    }
}

/// `Left(𝓛 𝓔^T 𝓤) x` without densifying. Entry `(i, j)` collects
/// `𝓛[i][c_k] 𝓤[r_k][j]` only for `j <= n - 2 - i`, which is a prefix of
/// the row segment of pivot `k`.
pub fn matvec_bruhat(g: &BruhatGenerator, x: &[u64], counter: &mut OpCounter) -> Result<Vec<u64>> {
    let table = PrefixTable::new(g, x, counter)?;
    let f = g.field();
    let n = g.n();
    let mut y = vec![0; n];
    let mut touched = vec![false; n];
    let (mut adds, mut muls) = (0u64, 0u64);
    for (k, p) in g.pivots().iter().enumerate() {
        let sums = table.table(k);
        for (t, &l) in p.lower.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let i = p.row + t;
            let prod = f.mul(l, sums[n - 2 - i - p.col]);
            muls += 1;
            if touched[i] {
                y[i] = f.add(y[i], prod);
                adds += 1;
            } else {
                y[i] = prod;
                touched[i] = true;
            }
        }
    }
    counter.record(adds, muls, 0);
    Ok(y)
}

pub fn matvec_compact(g: &CompactBruhatGenerator, x: &[u64], counter: &mut OpCounter) -> Result<Vec<u64>> {
    check_len(g.n(), x)?;
    let b = g.to_bruhat()?;
    matvec_bruhat(&b, x, counter)
}

fn add_into(f: PrimeField, y: &mut [u64], z: &[u64], counter: &mut OpCounter) {
    for (a, &b) in y.iter_mut().zip(z) {
        *a = f.add(*a, b);
    }
    counter.record(y.len() as u64, 0, 0);
}

/// `P L U Q x` through the factors.
pub(crate) fn pluq_apply(d: &PluqDecomposition, x: &[u64], counter: &mut OpCounter) -> Vec<u64> {
    if d.rank() == 0 {
        return vec![0; d.rows()];
    }
    let qx = d.q.gather_slice(x);
    let ux = d.u.matvec(&qx, counter).expect("shapes agree");
    let lux = d.l.matvec(&ux, counter).expect("shapes agree");
    d.p.permute_slice(&lux)
}

fn leaf_apply(f: PrimeField, a: &crate::matrix::DenseMatrix, x: &[u64], counter: &mut OpCounter) -> Vec<u64> {
    let m = a.rows();
    let mut y = vec![0; m];
    let (mut adds, mut muls) = (0u64, 0u64);
    for (i, yi) in y.iter_mut().enumerate() {
        for (j, &xj) in x.iter().enumerate().take((m - 1).saturating_sub(i)) {
            *yi = f.mul_add(a.get(i, j), xj, *yi);
            muls += 1;
            adds += u64::from(j > 0);
        }
    }
    counter.record(adds, muls, 0);
    y
}

fn node_apply(node: &TreeNode, x: &[u64], counter: &mut OpCounter) -> Vec<u64> {
    match node {
        TreeNode::Leaf(a) => leaf_apply(a.field(), a, x, counter),
        TreeNode::Node {
            size,
            pluq,
            top_right,
            bottom_left,
        } => {
            let h = size / 2;
            let f = pluq.field();
            let (xt, xb) = x.split_at(h);
            let mut top = pluq_apply(pluq, xt, counter);
            let z = node_apply(top_right, xb, counter);
            add_into(f, &mut top, &z, counter);
            let bottom = node_apply(bottom_left, xt, counter);
            top.extend(bottom);
            top
        }
    }
}

pub fn matvec_tree(g: &TreeGenerator, x: &[u64], counter: &mut OpCounter) -> Result<Vec<u64>> {
    check_len(g.n(), x)?;
    let Placement { row, col } = g.placement();
    let mut big = vec![0; g.size()];
    big[col..col + g.n()].copy_from_slice(x);
    let y = node_apply(g.root(), &big, counter);
    Ok(y[row..row + g.n()].to_vec())
}

pub fn matvec_lt(rep: &LtRep, x: &[u64], counter: &mut OpCounter) -> Result<Vec<u64>> {
    match rep {
        LtRep::Tree(g) => matvec_tree(g, x, counter),
        LtRep::Bruhat(g) => matvec_bruhat(g, x, counter),
        LtRep::Compact(g) => matvec_compact(g, x, counter),
    }
}

/// `J (X_L x) + d ∘ x + X_U (J x)`.
pub fn matvec_qs(m: &QsMatrix, x: &[u64], counter: &mut OpCounter) -> Result<Vec<u64>> {
    check_len(m.n(), x)?;
    let f = m.field();
    let mut y: Vec<u64> = matvec_lt(m.lower(), x, counter)?.into_iter().rev().collect();
    let xr: Vec<u64> = x.iter().rev().copied().collect();
    let u = matvec_lt(m.upper(), &xr, counter)?;
    for i in 0..m.n() {
        y[i] = f.add(f.mul_add(m.diag()[i], x[i], y[i]), u[i]);
    }
    counter.record(2 * m.n() as u64, m.n() as u64, 0);
    Ok(y)
}
