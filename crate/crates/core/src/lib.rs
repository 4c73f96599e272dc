//! # liealg
//!
//! Finite-dimensional matrix representations of differential operators with
//! polynomial coefficients, built from Lagrange interpolation on arbitrary
//! partitions of an interval and lifted to tensor-product grids.
//!
//! On a partition `x_0 < ... < x_n` the derivative is represented by the
//! matrix `Z` with `Z_jk = l_k'(x_j)` and multiplication by `x` by
//! `X = diag(x_0, ..., x_n)`. A differential operator `sum a_k(x) (d/dx)^k`
//! becomes `sum a_k(X) Z^k`. In `d` dimensions each `∂/∂x^a` becomes a lifted
//! operator acting on one tensor factor.
//!
//! Modules:
//!
//! - [`linalg`]: dense matrices, Kronecker product, LU with condition
//!   estimate, numerical rank
//! - [`interp`]: partitions, π-weights, Lagrange interpolation
//! - [`operator_1d`]: `Z`, `X` and polynomial operator assembly
//! - [`operator_nd`]: multi-index linearization and lifted operators
//! - [`audit`]: checks of the rank and nilpotency properties of `Z` and its
//!   lifts
//! - [`bvp`]: the 1-D and 2-D boundary-value experiments
//! - [`cli`]: the `liealg` command-line driver
//!
//! ```
//! use liealg::interp::Partition;
//! use liealg::operator_1d::diff_matrix;
//!
//! let p = Partition::new(vec![0.0, 1.0, 2.0]).unwrap();
//! let z = diff_matrix(&p);
//! // derivative of x^2 sampled at the nodes
//! let d = z.mul_vec(&[0.0, 1.0, 4.0]).unwrap();
//! assert!((d[2] - 4.0).abs() < 1e-14);
//! ```

pub mod audit;
pub mod bvp;
pub mod cli;
pub mod error;
pub mod interp;
pub mod linalg;
pub mod operator_1d;
pub mod operator_nd;

pub use error::{Error, Result};
pub use interp::Partition;
pub use linalg::DenseMatrix;
