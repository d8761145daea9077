//! Interior-point solver for mixed dense-sparse (MDS) nonlinear programs.
//!
//! Problems partition their variables into a dense block `x_d` (dense Hessian
//! and Jacobian columns) and a sparse block `x_s` (diagonal Hessian, sparse
//! Jacobian columns). The solver exploits this split: the symmetric indefinite
//! KKT system of each Newton step is compressed, by eliminating the sparse
//! variable block, into a smaller *dense* system that is factorized with a
//! Bunch-Kaufman LDLᵀ. The factorization reports matrix inertia, which drives
//! the regularization loop of the filter line-search method.
//!
//! The crate is split along the computation's seams:
//!
//! - [`linalg`]: dense, triplet and mixed dense-sparse kernels behind an
//!   abstract [`linalg::Kernels`] interface with a runtime backend factory;
//! - [`ldl`]: the dense Bunch-Kaufman LDLᵀ factorization with solve and
//!   inertia extraction;
//! - [`nlp`]: the problem abstraction plus built-in test problems;
//! - [`ipm`]: the filter line-search interior-point loop itself.
//!
//! The core is `no_std`-compatible (requires `alloc`); file formats, timing
//! clocks backed by the OS and the command-line driver live in the companion
//! `mdsipm-cli` crate. Kernel timing inside the solver is injected through the
//! [`clock::Clock`] trait so the algorithm code stays platform-free.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(rust_2018_idioms)]
#![allow(clippy::too_many_arguments)]

extern crate alloc;

pub mod clock;
pub mod ipm;
pub mod ldl;
pub mod linalg;
pub mod nlp;
pub mod rng;

/// Magnitude treated as an infinite bound. Components whose lower and upper
/// bounds both reach this magnitude never restrict a step or contribute
/// barrier terms.
pub const INFINITY_SENTINEL: f64 = 1e20;

/// A finite bound in the sentinel convention.
#[inline]
pub fn is_finite_bound(b: f64) -> bool {
    b.abs() < INFINITY_SENTINEL
}

pub use ipm::{solve, SolveResult, SolveStatus, Solver, SolverOptions};
pub use ldl::{bk_factorize, Inertia, LdlFactors};
pub use linalg::{make_linear_algebra, BackendSelector, DenseMatrix, Kernels, TripletMatrix};
pub use nlp::{synthetic_problem, MdsProblem};
