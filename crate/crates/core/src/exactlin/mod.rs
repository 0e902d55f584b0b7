//! Exact field arithmetic and linear algebra.

mod field;
mod matrix;

pub use field::{FieldSpec, Scalar};
pub use matrix::{axpy, kernel_basis, rank, scale, solve, to_dense, to_sparse, Echelon, Matrix, SparseVec};
