use alloc::boxed::Box;

use super::error::check_dim;
use super::{DenseMatrix, LinAlgError, PolicyKernels, ReferenceKernels, SeqExec, TripletMatrix};
use crate::is_finite_bound;

/// Vector reduction kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    InfNorm,
    OneNorm,
    TwoNorm,
    Min,
    Max,
}

/// Memory space of a kernel suite. `Default` is the hand-rolled reference
/// implementation; `Host` is the policy-parameterized implementation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemorySpace {
    Default,
    Host,
}

/// Execution policy within a kernel call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

/// Runtime backend selection for [`make_linear_algebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BackendSelector {
    pub memory_space: MemorySpace,
    pub execution: Execution,
}

impl Default for BackendSelector {
    fn default() -> Self {
        Self {
            memory_space: MemorySpace::Default,
            execution: Execution::Sequential,
        }
    }
}

impl BackendSelector {
    pub fn host_sequential() -> Self {
        Self {
            memory_space: MemorySpace::Host,
            execution: Execution::Sequential,
        }
    }

    pub fn host_parallel() -> Self {
        Self {
            memory_space: MemorySpace::Host,
            execution: Execution::Parallel,
        }
    }
}

/// Abstract kernel suite. A handle is immutable after construction and safe
/// to share across threads; kernels mutate nothing but their designated
/// output buffer.
pub trait Kernels: Send + Sync {
    /// `y <- y + alpha * x`.
    fn axpy(&self, alpha: f64, x: &[f64], y: &mut [f64]) -> Result<(), LinAlgError>;

    /// `sum_i x_i * y_i`.
    fn dot(&self, x: &[f64], y: &[f64]) -> Result<f64, LinAlgError>;

    fn reduce(&self, x: &[f64], kind: Reduction) -> Result<f64, LinAlgError>;

    /// Largest step `alpha` in `(0, 1]` along `dx` keeping `x` a `tau`
    /// fraction away from every finite bound it approaches:
    /// `alpha = min(1, min_i tau * gap_i / |dx_i|)` over components moving
    /// toward a finite bound. Requires `x` strictly interior.
    fn max_step_to_bound(
        &self,
        x: &[f64],
        dx: &[f64],
        lo: &[f64],
        up: &[f64],
        tau: f64,
    ) -> Result<f64, LinAlgError>;

    /// `y <- beta * y + alpha * A x` (`Aᵀ x` when `transpose`).
    fn gemv(
        &self,
        beta: f64,
        y: &mut [f64],
        alpha: f64,
        a: &DenseMatrix,
        x: &[f64],
        transpose: bool,
    ) -> Result<(), LinAlgError>;

    /// `Y <- beta * Y + alpha * A X`.
    fn gemm(
        &self,
        beta: f64,
        y: &mut DenseMatrix,
        alpha: f64,
        a: &DenseMatrix,
        x: &DenseMatrix,
    ) -> Result<(), LinAlgError>;

    /// Triplet `y <- beta * y + alpha * A x` (`Aᵀ x` when `transpose`);
    /// duplicate entries accumulate.
    fn triplet_times_vec(
        &self,
        beta: f64,
        y: &mut [f64],
        alpha: f64,
        a: &TripletMatrix,
        x: &[f64],
        transpose: bool,
    ) -> Result<(), LinAlgError>;

    /// Mixed dense-sparse product: `x` splits as `[x_sparse; x_dense]` and
    /// `y <- beta * y + alpha * (Jsp x_sparse + Jde x_dense)`, the dense part
    /// accumulated after the sparse part.
    fn mds_times_vec(
        &self,
        beta: f64,
        y: &mut [f64],
        alpha: f64,
        jsp: &TripletMatrix,
        jde: &DenseMatrix,
        x: &[f64],
    ) -> Result<(), LinAlgError>;

    /// Fused `M <- M + sign * A diag(d) Bᵀ` in one pass over the triplet
    /// entries, never materializing `A diag(d)` or the full product.
    fn fused_add_sdst(
        &self,
        m: &mut DenseMatrix,
        a: &TripletMatrix,
        d: &[f64],
        b: &TripletMatrix,
        sign: f64,
    ) -> Result<(), LinAlgError>;
}

/// Linear-algebra factory: returns a kernel suite for the requested memory
/// space and execution policy.
///
/// `Default` is sequential-only. `Host`/`Parallel` requires the `parallel`
/// feature; without it the selector is rejected with a config error.
pub fn make_linear_algebra(selector: BackendSelector) -> Result<Box<dyn Kernels>, LinAlgError> {
    match (selector.memory_space, selector.execution) {
        (MemorySpace::Default, Execution::Sequential) => Ok(Box::new(ReferenceKernels)),
        (MemorySpace::Default, Execution::Parallel) => Err(LinAlgError::Config(
            "the default suite is sequential; select the host memory space for parallel execution",
        )),
        (MemorySpace::Host, Execution::Sequential) => Ok(Box::new(PolicyKernels::<SeqExec>::new())),
        #[cfg(feature = "parallel")]
        (MemorySpace::Host, Execution::Parallel) => {
            Ok(Box::new(PolicyKernels::<super::ParExec>::new()))
        }
        #[cfg(not(feature = "parallel"))]
        (MemorySpace::Host, Execution::Parallel) => Err(LinAlgError::Config(
            "parallel execution requires the `parallel` feature",
        )),
    }
}

// Shape and precondition checks shared by every backend, so all suites agree
// bit-for-bit on both results and error paths.

pub(super) fn check_axpy(x: &[f64], y: &[f64]) -> Result<(), LinAlgError> {
    check_dim!(x.len() == y.len(), "vec_axpy", "x has {} entries, y has {}", x.len(), y.len());
    Ok(())
}

pub(super) fn check_dot(x: &[f64], y: &[f64]) -> Result<(), LinAlgError> {
    check_dim!(x.len() == y.len(), "vec_dot", "x has {} entries, y has {}", x.len(), y.len());
    Ok(())
}

pub(super) fn check_reduce(x: &[f64], kind: Reduction) -> Result<(), LinAlgError> {
    if x.is_empty() && matches!(kind, Reduction::Min | Reduction::Max) {
        return Err(LinAlgError::EmptyInput("vec_reduce min/max"));
    }
    Ok(())
}

pub(super) fn check_max_step(
    x: &[f64],
    dx: &[f64],
    lo: &[f64],
    up: &[f64],
) -> Result<(), LinAlgError> {
    check_dim!(
        x.len() == dx.len() && x.len() == lo.len() && x.len() == up.len(),
        "max_step_to_bound",
        "x {}, dx {}, lo {}, up {}",
        x.len(),
        dx.len(),
        lo.len(),
        up.len()
    );
    for i in 0..x.len() {
        if (is_finite_bound(lo[i]) && x[i] <= lo[i]) || (is_finite_bound(up[i]) && x[i] >= up[i]) {
            return Err(LinAlgError::NotInterior { index: i });
        }
    }
    Ok(())
}

/// Per-component fraction-to-boundary cap; `f64::INFINITY` when unrestricted.
#[inline]
pub(super) fn step_cap(x: f64, dx: f64, lo: f64, up: f64, tau: f64) -> f64 {
    if dx > 0.0 && is_finite_bound(up) {
        tau * (up - x) / dx
    } else if dx < 0.0 && is_finite_bound(lo) {
        tau * (x - lo) / (-dx)
    } else {
        f64::INFINITY
    }
}

pub(super) fn check_gemv(
    y: &[f64],
    a: &DenseMatrix,
    x: &[f64],
    transpose: bool,
) -> Result<(), LinAlgError> {
    let (ry, rx) = if transpose {
        (a.cols(), a.rows())
    } else {
        (a.rows(), a.cols())
    };
    check_dim!(
        y.len() == ry && x.len() == rx,
        "dense_gemv",
        "A is {}x{} (transpose={}), x has {}, y has {}",
        a.rows(),
        a.cols(),
        transpose,
        x.len(),
        y.len()
    );
    Ok(())
}

pub(super) fn check_gemm(
    y: &DenseMatrix,
    a: &DenseMatrix,
    x: &DenseMatrix,
) -> Result<(), LinAlgError> {
    check_dim!(
        a.cols() == x.rows() && y.rows() == a.rows() && y.cols() == x.cols(),
        "dense_gemm",
        "Y {}x{}, A {}x{}, X {}x{}",
        y.rows(),
        y.cols(),
        a.rows(),
        a.cols(),
        x.rows(),
        x.cols()
    );
    Ok(())
}

pub(super) fn check_triplet_vec(
    y: &[f64],
    a: &TripletMatrix,
    x: &[f64],
    transpose: bool,
) -> Result<(), LinAlgError> {
    let (ry, rx) = if transpose {
        (a.cols(), a.rows())
    } else {
        (a.rows(), a.cols())
    };
    check_dim!(
        y.len() == ry && x.len() == rx,
        "triplet_times_vec",
        "A is {}x{} (transpose={}), x has {}, y has {}",
        a.rows(),
        a.cols(),
        transpose,
        x.len(),
        y.len()
    );
    if let Some(k) = a.first_bad_entry() {
        return Err(a.malformed(k));
    }
    Ok(())
}

pub(super) fn check_mds_vec(
    y: &[f64],
    jsp: &TripletMatrix,
    jde: &DenseMatrix,
    x: &[f64],
) -> Result<(), LinAlgError> {
    check_dim!(
        x.len() == jsp.cols() + jde.cols() && jsp.rows() == jde.rows() && y.len() == jsp.rows(),
        "mds_times_vec",
        "Jsp {}x{}, Jde {}x{}, x has {}, y has {}",
        jsp.rows(),
        jsp.cols(),
        jde.rows(),
        jde.cols(),
        x.len(),
        y.len()
    );
    if let Some(k) = jsp.first_bad_entry() {
        return Err(jsp.malformed(k));
    }
    Ok(())
}

pub(super) fn check_fused(
    m: &DenseMatrix,
    a: &TripletMatrix,
    d: &[f64],
    b: &TripletMatrix,
) -> Result<(), LinAlgError> {
    check_dim!(
        a.cols() == d.len() && b.cols() == d.len() && m.rows() == a.rows() && m.cols() == b.rows(),
        "fused_add_sdst",
        "M {}x{}, A {}x{}, d has {}, B {}x{}",
        m.rows(),
        m.cols(),
        a.rows(),
        a.cols(),
        d.len(),
        b.rows(),
        b.cols()
    );
    if let Some(k) = a.first_bad_entry() {
        return Err(a.malformed(k));
    }
    if let Some(k) = b.first_bad_entry() {
        return Err(b.malformed(k));
    }
    Ok(())
}
