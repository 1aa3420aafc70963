//! Quasiseparable matrices stored as diagonal plus two left triangular parts.
//!
//! `M = J X_L + diag(d) + X_U J` where `X_L = J strictlower(M)` and
//! `X_U = strictupper(M) J` are left triangular.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{OpCounter, PrimeField};
use crate::generators::bruhat::{lt_bruhat, BruhatGenerator};
use crate::generators::compact::{compact_bruhat, CompactBruhatGenerator};
use crate::generators::tree::{tree_generator_with, Placement, TreeGenerator, TreeOptions, DEFAULT_LEAF_SIZE};
use crate::matrix::{reverse_cols, reverse_rows, DenseMatrix};
use crate::orders::{lower_left_triangular, upper_left_triangular};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    Tree,
    Bruhat,
    Compact,
}

impl RepKind {
    pub fn name(self) -> &'static str {
        match self {
            RepKind::Tree => "tree",
            RepKind::Bruhat => "bruhat",
            RepKind::Compact => "compact",
        }
    }
}

impl core::str::FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(RepKind::Tree),
            "bruhat" => Ok(RepKind::Bruhat),
            "compact" => Ok(RepKind::Compact),
            _ => Err(Error::InvalidArgument("unknown representation kind")),
        }
    }
}

/// One of the three left triangular representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LtRep {
    Tree(TreeGenerator),
    Bruhat(BruhatGenerator),
    Compact(CompactBruhatGenerator),
}

impl LtRep {
    /// Builds the requested representation of a left triangular matrix.
    ///
    /// Trees use `placement`; the compact form uses the order of the matrix
    /// as block width.
    pub fn build(a: &DenseMatrix, kind: RepKind, placement: Placement, counter: &mut OpCounter) -> Result<Self> {
        a.check_left_triangular()?;
        Ok(match kind {
            RepKind::Tree => LtRep::Tree(tree_generator_with(
                a,
                TreeOptions {
                    leaf_size: DEFAULT_LEAF_SIZE,
                    placement,
                },
                counter,
            )?),
            RepKind::Bruhat => LtRep::Bruhat(lt_bruhat(a, counter)?),
            RepKind::Compact => {
                let g = lt_bruhat(a, counter)?;
                LtRep::Compact(compact_bruhat(&g, g.order())?)
            }
        })
    }

    pub fn kind(&self) -> RepKind {
        match self {
            LtRep::Tree(_) => RepKind::Tree,
            LtRep::Bruhat(_) => RepKind::Bruhat,
            LtRep::Compact(_) => RepKind::Compact,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            LtRep::Tree(g) => g.n(),
            LtRep::Bruhat(g) => g.n(),
            LtRep::Compact(g) => g.n(),
        }
    }

    pub fn field(&self) -> PrimeField {
        match self {
            LtRep::Tree(g) => g.field(),
            LtRep::Bruhat(g) => g.field(),
            LtRep::Compact(g) => g.field(),
        }
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        match self {
            LtRep::Tree(g) => g.reconstruct(),
            LtRep::Bruhat(g) => g.reconstruct(),
            LtRep::Compact(g) => g.reconstruct(),
        }
    }

    pub fn stored_elems(&self) -> usize {
        match self {
            LtRep::Tree(g) => g.stored_elems(),
            LtRep::Bruhat(g) => g.stored_elems(),
            LtRep::Compact(g) => g.stored_elems(),
        }
    }

    /// The tree form at `placement`, reusing `self` when it already matches.
    /// Conversions are not counted.
    pub fn to_tree(&self, placement: Placement) -> TreeGenerator {
        match self {
            LtRep::Tree(g) if g.placement() == placement => g.clone(),
            _ => {
                let opts = TreeOptions {
                    leaf_size: match self {
                        LtRep::Tree(g) => g.leaf_size(),
                        _ => DEFAULT_LEAF_SIZE,
                    },
                    placement,
                };
                tree_generator_with(&self.reconstruct(), opts, &mut OpCounter::new())
                    .expect("reconstruction is left triangular and placement fits")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QsMatrix {
    n: usize,
    field: PrimeField,
    diag: Vec<u64>,
    lower: LtRep,
    upper: LtRep,
}

/// Tree placements for `(X_L, X_U)` inside the padded square of side `N`.
/// With `X_L` at `(N - n, 0)` and `X_U` at `(0, N - n)` all four products of
/// parts line up without re-embedding.
pub fn qs_placements(n: usize) -> (Placement, Placement) {
    let pad = n.max(1).next_power_of_two() - n;
    (Placement { row: pad, col: 0 }, Placement { row: 0, col: pad })
}

impl QsMatrix {
    pub fn from_parts(diag: Vec<u64>, lower: LtRep, upper: LtRep) -> Result<Self> {
        let n = diag.len();
        let field = lower.field();
        if lower.n() != n || upper.n() != n {
            return Err(Error::InvalidGenerator("part sizes differ from the diagonal"));
        }
        if upper.field() != field {
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: upper.field().modulus(),
            });
        }
        if diag.iter().any(|&x| x >= field.modulus()) {
            return Err(Error::InvalidGenerator("non-canonical residue"));
        }
        Ok(QsMatrix {
            n,
            field,
            diag,
            lower,
            upper,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn diag(&self) -> &[u64] {
        &self.diag
    }

    /// Representation of `J strictlower(M)`.
    pub fn lower(&self) -> &LtRep {
        &self.lower
    }

    /// Representation of `strictupper(M) J`.
    pub fn upper(&self) -> &LtRep {
        &self.upper
    }

    pub fn kind(&self) -> RepKind {
        self.lower.kind()
    }

    pub fn stored_elems(&self) -> usize {
        self.n + self.lower.stored_elems() + self.upper.stored_elems()
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let mut m = reverse_rows(&self.lower.reconstruct());
        let u = reverse_cols(&self.upper.reconstruct());
        for i in 0..self.n {
            for j in i + 1..self.n {
                m.set(i, j, u.get(i, j));
            }
            m.set(i, i, self.diag[i]);
        }
        m
    }
}

/// Splits a square matrix into diagonal and the two left triangular parts
/// and builds the chosen representation of each.
pub fn qs_from_dense(m: &DenseMatrix, kind: RepKind, counter: &mut OpCounter) -> Result<QsMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let (pl, pu) = qs_placements(m.rows());
    let lower = LtRep::build(&lower_left_triangular(m), kind, pl, counter)?;
    let upper = LtRep::build(&upper_left_triangular(m), kind, pu, counter)?;
    QsMatrix::from_parts(m.diagonal(), lower, upper)
}
