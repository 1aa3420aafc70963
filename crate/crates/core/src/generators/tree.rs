//! Binary tree of PLUQ decompositions for left triangular matrices.
//!
//! A left triangular matrix splits as `[A1 A2; A3 0]` where `A2` and `A3`
//! are again left triangular. `A1` is stored through its rank profile
//! revealing PLUQ decomposition and the two off-diagonal quadrants recurse.

use alloc::boxed::Box;

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::matrix::DenseMatrix;
use crate::pluq::{pluq_rpm, PluqDecomposition};

pub const DEFAULT_LEAF_SIZE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeNode {
    /// Dense left triangular block.
    Leaf(DenseMatrix),
    Node {
        size: usize,
        pluq: PluqDecomposition,
        top_right: Box<TreeNode>,
        bottom_left: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn size(&self) -> usize {
        match self {
            TreeNode::Leaf(m) => m.rows(),
            TreeNode::Node { size, .. } => *size,
        }
    }

    fn build(a: &DenseMatrix, leaf_size: usize, counter: &mut OpCounter) -> TreeNode {
        let n = a.rows();
        if n <= leaf_size || n < 2 {
            return TreeNode::Leaf(a.clone());
        }
        let h = n / 2;
        let pluq = pluq_rpm(&a.submatrix(0, h, 0, h), counter);
        let top_right = TreeNode::build(&a.submatrix(0, h, h, n), leaf_size, counter);
        let bottom_left = TreeNode::build(&a.submatrix(h, n, 0, h), leaf_size, counter);
        TreeNode::Node {
            size: n,
            pluq,
            top_right: Box::new(top_right),
            bottom_left: Box::new(bottom_left),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            TreeNode::Leaf(m) => m.clone(),
            TreeNode::Node {
                size,
                pluq,
                top_right,
                bottom_left,
            } => {
                let h = size / 2;
                let mut out = DenseMatrix::zeros(pluq.field(), *size, *size);
                out.set_block(0, 0, &pluq.reconstruct(&mut OpCounter::new()));
                out.set_block(0, h, &top_right.to_dense());
                out.set_block(h, 0, &bottom_left.to_dense());
                out
            }
        }
    }

    /// Field elements held by the tree: trapezoidal PLUQ factors plus the
    /// left triangular positions of the leaves.
    pub fn stored_elems(&self) -> usize {
        match self {
            TreeNode::Leaf(m) => {
                let n = m.rows();
                n * n.saturating_sub(1) / 2
            }
            TreeNode::Node {
                pluq,
                top_right,
                bottom_left,
                ..
            } => pluq.stored_elems() + top_right.stored_elems() + bottom_left.stored_elems(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Node {
                top_right, bottom_left, ..
            } => 1 + top_right.depth().max(bottom_left.depth()),
        }
    }
}

/// Where an `n x n` left triangular matrix sits inside the power-of-two
/// square the tree is built on. Any offsets with `row + col <= size - n`
/// keep the embedded matrix left triangular.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Placement {
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeOptions {
    pub leaf_size: usize,
    pub placement: Placement,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            leaf_size: DEFAULT_LEAF_SIZE,
            placement: Placement::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeGenerator {
    n: usize,
    field: PrimeField,
    placement: Placement,
    leaf_size: usize,
    root: TreeNode,
}

impl TreeGenerator {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side of the padded square.
    pub fn size(&self) -> usize {
        self.root.size()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn stored_elems(&self) -> usize {
        self.root.stored_elems()
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let Placement { row, col } = self.placement;
        self.root.to_dense().submatrix(row, row + self.n, col, col + self.n)
    }

    /// Rebuilds a generator from its parts, checking the tree shape, the
    /// PLUQ factors, and that nothing is stored outside the placed matrix.
    pub fn from_parts(n: usize, placement: Placement, leaf_size: usize, root: TreeNode) -> Result<Self> {
        let size = root.size();
        if size != n.max(1).next_power_of_two() || placement.row + placement.col + n > size {
            return Err(Error::InvalidGenerator("tree size does not match its placement"));
        }
        let field = match &root {
            TreeNode::Leaf(m) => m.field(),
            TreeNode::Node { pluq, .. } => pluq.field(),
        };
        root.check(field)?;
        let dense = root.to_dense();
        let Placement { row, col } = placement;
        for i in 0..size {
            for j in 0..size {
                let inside = (row..row + n).contains(&i) && (col..col + n).contains(&j);
                if !inside && dense.get(i, j) != 0 {
                    return Err(Error::InvalidGenerator("tree stores entries outside the placed matrix"));
                }
            }
        }
        Ok(TreeGenerator {
            n,
            field,
            placement,
            leaf_size: leaf_size.max(1),
            root,
        })
    }
}

impl TreeNode {
    fn check(&self, field: PrimeField) -> Result<()> {
        match self {
            TreeNode::Leaf(m) => {
                if m.field() != field {
                    return Err(Error::InvalidGenerator("mixed fields in tree"));
                }
                m.check_left_triangular()
            }
            TreeNode::Node {
                size,
                pluq,
                top_right,
                bottom_left,
            } => {
                let h = size / 2;
                if *size < 2 || size % 2 != 0 || pluq.rows() != h || pluq.cols() != h || pluq.field() != field {
                    return Err(Error::InvalidGenerator("node factors do not match its size"));
                }
                pluq.validate()?;
                if top_right.size() != h || bottom_left.size() != h {
                    return Err(Error::InvalidGenerator("children must have half the size"));
                }
                top_right.check(field)?;
                bottom_left.check(field)
            }
        }
    }
}

/// Builds the tree generator of a left triangular matrix with the default
/// options (leaves of size 4, top-left placement).
pub fn tree_generator(a: &DenseMatrix, counter: &mut OpCounter) -> Result<TreeGenerator> {
    tree_generator_with(a, TreeOptions::default(), counter)
}

pub fn tree_generator_with(a: &DenseMatrix, options: TreeOptions, counter: &mut OpCounter) -> Result<TreeGenerator> {
    a.check_left_triangular()?;
    let n = a.rows();
    let size = n.max(1).next_power_of_two();
    let Placement { row, col } = options.placement;
    if row + col + n > size {
        return Err(Error::Placement);
    }
    let padded = a.embed(size, row, col);
    let root = TreeNode::build(&padded, options.leaf_size.max(1), counter);
    Ok(TreeGenerator {
        n,
        field: a.field(),
        placement: options.placement,
        leaf_size: options.leaf_size.max(1),
        root,
    })
}
