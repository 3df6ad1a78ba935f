//! Permutations, tetrads and the tetrad-class basis.

mod bijection;
mod perm;
mod tetrad;

pub use bijection::{
    class_count, doubled_points, enumerate_classes, lehmer_rank, perm_to_tetrad, tetrad_to_perm,
    ClassTable, SignedIndexMap, TetradClass, R_MAX,
};
pub use perm::{Perm, Sign};
pub use tetrad::{canonicalize, Cycle, Tetrad};
