//! Exact structured linear algebra over prime fields for quasiseparable
//! matrices.
//!
//! The crate computes rank profile revealing PLUQ decompositions,
//! quasiseparable orders, three compact representations of left triangular
//! matrices (a binary tree of PLUQ factors, the Bruhat generator and its
//! block compressed form) and the matrix-vector and matrix-matrix products
//! that run on them. Every arithmetic routine takes an [`OpCounter`].
//!
//! Builds without `std`; `alloc` is required.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod error;
pub mod field;
pub mod generators;
pub mod matrix;
pub mod orders;
pub mod perm;
pub mod pluq;
pub mod structops;

pub use error::{Error, Result};
pub use field::{OpCounter, PrimeField};
pub use matrix::DenseMatrix;
pub use orders::{quasiseparable_orders, QsOrders};
pub use perm::Permutation;
pub use pluq::{pluq_rpm, PluqDecomposition, RankProfileMatrix};
