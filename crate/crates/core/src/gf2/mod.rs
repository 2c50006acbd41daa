//! Binary linear algebra over GF(2).

pub mod alist;
mod bitvec;
mod matrix;
mod perm;

pub use bitvec::BitVec;
pub use matrix::SparseBinMatrix;
pub use perm::PermutationArray;
