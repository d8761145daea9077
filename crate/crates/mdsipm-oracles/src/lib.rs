//! Reference oracles for verifying the `mdsipm` solver.
//!
//! Everything in this crate recomputes quantities through routes that are
//! independent of the code paths under test: eigenvalue sign counts via
//! Householder tridiagonalization and Sturm sequences (never the LDLᵀ),
//! linear solves via row elimination with partial pivoting (never the
//! compressed path), derivatives via central finite differences, and
//! reference optima via active-set enumeration on densified problem data.
//!
//! The crate borrows only data types and the model-evaluation interface
//! from `mdsipm`; none of its kernels or factorizations.

pub mod dense;
pub mod eig;
pub mod fd;
pub mod gen;
pub mod kkt_check;
pub mod qp;

pub use dense::{lu_solve, random_symmetric};
pub use eig::{sign_counts, SignCounts};
pub use fd::{check_derivatives, FdReport};
pub use gen::{random_kkt4, RandomKkt4};
pub use kkt_check::{check_kkt, KktResidualNorms};
pub use qp::{dense_qp_from_mds, solve_by_enumeration, DenseQp, IneqSource, QpSolution};
