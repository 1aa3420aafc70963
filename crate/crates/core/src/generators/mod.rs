pub mod bruhat;
pub mod compact;
pub mod qs;
pub mod random;
pub mod tree;

pub use bruhat::{lt_bruhat, BruhatGenerator, BruhatPivot};
pub use compact::{
    compact_bruhat, compress_echelon, compress_echelon_transposed, decompress_echelon, CompactBruhatGenerator,
    CompactEchelon,
};
pub use qs::{qs_from_dense, qs_placements, LtRep, QsMatrix, RepKind};
pub use random::{random_left_triangular, random_low_rank, random_matrix, random_qs, seeded_rng};
pub use tree::{tree_generator, tree_generator_with, Placement, TreeGenerator, TreeNode, TreeOptions, DEFAULT_LEAF_SIZE};
