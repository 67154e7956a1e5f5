//! Bivariate R-matrix of `U_q(gl(2|1))` built from its one-parameter family of
//! 4-dimensional irreps, with the representation labels `alpha`, `beta` acting
//! as non-additive spectral parameters.
//!
//! The crate covers the whole pipeline:
//!
//! * [`qdeform`]: q-numbers and parameter-domain validation,
//! * [`superlinalg`]: Z2-graded tensor products, graded permutation, supertrace,
//! * [`repr`]: the irreps and the coproduct action on two-fold tensor products,
//! * [`intertwine`]: symmetry-adapted bases and elementary intertwiners,
//! * [`rmatrix`]: the closed-form and rational R-matrices and their checks,
//! * [`fermion`]: the correlated-electron Hamiltonians, gauge maps, limits and
//!   transfer matrices,
//! * [`cli`]: the batch front end and its JSON/CSV report format.

pub mod cli;
pub mod error;
pub mod fermion;
pub mod intertwine;
pub mod qdeform;
pub mod repr;
pub mod rmatrix;
pub mod superlinalg;

pub use error::{Error, Result};
pub use num_complex::Complex64;
