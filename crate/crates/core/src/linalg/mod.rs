//! Dense symmetric linear algebra: Cholesky, Jacobi eigensolvers, SPD powers
//! and a one-sided Jacobi SVD.
//!
//! Everything is dense and deterministic; identical input bits give identical
//! output bits.

mod cholesky;
mod eigen;
mod matrix;
mod svd;

pub use cholesky::{
    cholesky, cholesky_solve, cholesky_solve_vec, solve_lower, solve_lower_transpose, PIVOT_TOL,
    SYMMETRY_TOL,
};
pub use eigen::{
    gen_sym_eig, spd_power, sym_eig, EigenDecomposition, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL,
};
pub use matrix::{bilinear, dot, norm2, DenseMatrix};
pub use svd::{svd, Svd};
