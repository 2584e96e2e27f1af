//! Small dense real linear algebra: vectors as slices, dense and symmetric
//! matrices, Gram-Schmidt frames, cyclic Jacobi eigensolves and pivoted solves.

mod eigen;
mod frame;
mod matrix;
mod solve;
pub mod vector;

pub use eigen::{sym_eig, sym_eig_max, SymEigen};
pub use frame::{orthogonal_complement, orthogonal_complement_frame, orthonormalize};
pub use matrix::{Matrix, SymMat};
pub use solve::solve;
pub use vector::{axpy, dot, norm, norm2, normalized, scaled, sub, unit};
