//! Moore–Penrose operator identities between weighted inner-product spaces,
//! and their finite-element realization through the trace operator of P1
//! functions on polygons.
//!
//! - [`linalg`]: dense matrices, Cholesky, Jacobi eigen and SVD.
//! - [`operator`]: weighted spaces, adjoints, pseudoinverses, graph powers, T_B.
//! - [`identity_suite`]: residual checks of the operator identities.
//! - [`fem`]: meshes, assembly, trace, Steklov and Poisson operators.
//! - [`inequality_lab`]: constants of the trace and harmonic inequalities.
//! - [`cli`]: batch runner behind the `tracelab` binary.

pub mod cli;
pub mod error;
pub mod fem;
pub mod identity_suite;
pub mod inequality_lab;
pub mod linalg;
pub mod operator;

pub use error::{Error, Result};
