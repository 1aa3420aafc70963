pub mod matvec;
pub mod product;

pub use matvec::{matvec_bruhat, matvec_compact, matvec_lt, matvec_qs, matvec_tree, PrefixTable};
pub use product::{mul_flat_by_lt, mul_lt_by_pluq, mul_lt_by_tall, mul_lt_lt, mul_pluq_by_lt, mul_qs_qs, MulMode};

use alloc::vec::Vec;

use crate::error::Result;
use crate::field::{OpCounter, PrimeField};
use crate::generators::{BruhatGenerator, CompactBruhatGenerator, LtRep, TreeGenerator};
use crate::matrix::DenseMatrix;

/// Common interface of the left triangular representations.
pub trait LeftTriangularRep {
    fn n(&self) -> usize;
    fn field(&self) -> PrimeField;
    /// Exact dense left triangular matrix.
    fn reconstruct(&self) -> DenseMatrix;
    fn matvec(&self, x: &[u64], counter: &mut OpCounter) -> Result<Vec<u64>>;
    fn stored_elems(&self) -> usize;
}

macro_rules! impl_rep {
    ($ty:ty, $mv:path) => {
        impl LeftTriangularRep for $ty {
            fn n(&self) -> usize {
                <$ty>::n(self)
            }
            fn field(&self) -> PrimeField {
                <$ty>::field(self)
            }
            fn reconstruct(&self) -> DenseMatrix {
                <$ty>::reconstruct(self)
            }
            fn matvec(&self, x: &[u64], counter: &mut OpCounter) -> Result<Vec<u64>> {
                $mv(self, x, counter)
            }
            fn stored_elems(&self) -> usize {
                <$ty>::stored_elems(self)
            }
        }
    };
}

impl_rep!(TreeGenerator, matvec_tree);
impl_rep!(BruhatGenerator, matvec_bruhat);
impl_rep!(CompactBruhatGenerator, matvec_compact);
impl_rep!(LtRep, matvec_lt);

/// Dense matrix of any representation.
pub fn reconstruct<G: LeftTriangularRep + ?Sized>(g: &G) -> DenseMatrix {
    g.reconstruct()
}
