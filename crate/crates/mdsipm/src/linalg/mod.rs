//! Dense, sparse-triplet and mixed dense-sparse linear-algebra kernels.
//!
//! The kernels cover the three cheap computation classes of the solver:
//! dense vector-vector operations (axpy, dot, reductions, fraction-to-boundary
//! step), matrix-vector products mixing sparse and dense blocks, and the fused
//! assembly `M += A·diag(d)·Bᵀ` that builds the compressed KKT blocks. The
//! dense factorization itself lives in [`crate::ldl`].
//!
//! All kernels are called through the [`Kernels`] trait; a concrete suite is
//! obtained from [`make_linear_algebra`] with a [`BackendSelector`]. The
//! `Default` memory space selects the hand-rolled reference loops; `Host`
//! selects the policy-parameterized implementation whose sequential policy is
//! bit-identical to the reference and whose parallel policy (feature
//! `parallel`) may differ only by floating-point reduction order.

mod dense;
mod error;
mod kernels;
mod policy;
mod reference;
#[cfg(test)]
mod tests;
mod triplet;

pub use dense::DenseMatrix;
pub use error::LinAlgError;
pub use kernels::{
    make_linear_algebra, BackendSelector, Execution, Kernels, MemorySpace, Reduction,
};
pub use policy::{PolicyKernels, SeqExec};
pub use reference::ReferenceKernels;
pub use triplet::TripletMatrix;

#[cfg(feature = "parallel")]
pub use policy::ParExec;
