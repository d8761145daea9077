//! Policy-parameterized kernel suite (the `Host` memory space).
//!
//! The execution policy is a type parameter, mirroring how portability
//! layers swap a loop's execution back end without touching its body. The
//! per-element arithmetic is shared with [`ReferenceKernels`], so the
//! sequential policy reproduces the reference bit-for-bit; the parallel
//! policy may reassociate reductions.

use core::marker::PhantomData;

use super::kernels::{
    check_axpy, check_dot, check_fused, check_gemm, check_gemv, check_max_step, check_mds_vec,
    check_reduce, check_triplet_vec, step_cap,
};
use super::reference::{column_dot, dot_in_order, fused_sandwich, gemm_row, triplet_scatter};
use super::{DenseMatrix, Kernels, LinAlgError, Reduction, TripletMatrix};

/// How a kernel body runs over its iteration space.
pub trait ExecPolicy: Send + Sync + 'static {
    /// `y[i] = f(i, y[i])` for every element.
    fn for_each_mut(y: &mut [f64], f: impl Fn(usize, f64) -> f64 + Sync + Send);

    /// Applies `f` to each `width`-sized consecutive chunk of `data`.
    fn for_each_chunk(data: &mut [f64], width: usize, f: impl Fn(usize, &mut [f64]) + Sync + Send);

    /// `sum_{i<len} term(i)`; summation order is policy-defined.
    fn sum(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64;

    /// `min_{i<len} term(i)`, `+inf` when empty. Exact regardless of order.
    fn min(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64;

    /// `max_{i<len} term(i)`, `-inf` when empty.
    fn max(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64;
}

/// Sequential policy: plain in-order loops.
#[derive(Clone, Copy, Debug, Default)]
pub struct SeqExec;

impl ExecPolicy for SeqExec {
    fn for_each_mut(y: &mut [f64], f: impl Fn(usize, f64) -> f64 + Sync + Send) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = f(i, *yi);
        }
    }

    fn for_each_chunk(data: &mut [f64], width: usize, f: impl Fn(usize, &mut [f64]) + Sync + Send) {
        for (i, chunk) in data.chunks_mut(width).enumerate() {
            f(i, chunk);
        }
    }

    fn sum(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
        let mut acc = 0.0;
        for i in 0..len {
            acc += term(i);
        }
        acc
    }

    fn min(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
        (0..len).map(term).fold(f64::INFINITY, f64::min)
    }

    fn max(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
        (0..len).map(term).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Rayon-backed parallel policy.
#[cfg(feature = "parallel")]
#[derive(Clone, Copy, Debug, Default)]
pub struct ParExec;

#[cfg(feature = "parallel")]
impl ExecPolicy for ParExec {
    fn for_each_mut(y: &mut [f64], f: impl Fn(usize, f64) -> f64 + Sync + Send) {
        use rayon::prelude::*;
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            *yi = f(i, *yi);
        });
    }

    fn for_each_chunk(data: &mut [f64], width: usize, f: impl Fn(usize, &mut [f64]) + Sync + Send) {
        use rayon::prelude::*;
        data.par_chunks_mut(width)
            .enumerate()
            .for_each(|(i, chunk)| f(i, chunk));
    }

    fn sum(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(term).sum()
    }

    fn min(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
        use rayon::prelude::*;
        (0..len)
            .into_par_iter()
            .map(term)
            .reduce(|| f64::INFINITY, f64::min)
    }

    fn max(len: usize, term: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
        use rayon::prelude::*;
        (0..len)
            .into_par_iter()
            .map(term)
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }
}

/// Kernel suite whose loops execute under policy `P`.
///
/// Scatter-style kernels (triplet products, fused sandwich) run sequentially
/// under every policy; their outputs carry data races otherwise and their
/// cost is negligible next to the dense factorization.
#[derive(Clone, Copy, Debug, Default)]
pub struct PolicyKernels<P: ExecPolicy> {
    _policy: PhantomData<P>,
}

impl<P: ExecPolicy> PolicyKernels<P> {
    pub fn new() -> Self {
        Self {
            _policy: PhantomData,
        }
    }
}

impl<P: ExecPolicy> Kernels for PolicyKernels<P> {
    fn axpy(&self, alpha: f64, x: &[f64], y: &mut [f64]) -> Result<(), LinAlgError> {
        check_axpy(x, y)?;
        P::for_each_mut(y, |i, yi| yi + alpha * x[i]);
        Ok(())
    }

    fn dot(&self, x: &[f64], y: &[f64]) -> Result<f64, LinAlgError> {
        check_dot(x, y)?;
        Ok(P::sum(x.len(), |i| x[i] * y[i]))
    }

    fn reduce(&self, x: &[f64], kind: Reduction) -> Result<f64, LinAlgError> {
        check_reduce(x, kind)?;
        Ok(match kind {
            Reduction::InfNorm => P::max(x.len(), |i| x[i].abs()).max(0.0),
            Reduction::OneNorm => P::sum(x.len(), |i| x[i].abs()),
            Reduction::TwoNorm => libm::sqrt(P::sum(x.len(), |i| x[i] * x[i])),
            Reduction::Min => P::min(x.len(), |i| x[i]),
            Reduction::Max => P::max(x.len(), |i| x[i]),
        })
    }

    fn max_step_to_bound(
        &self,
        x: &[f64],
        dx: &[f64],
        lo: &[f64],
        up: &[f64],
        tau: f64,
    ) -> Result<f64, LinAlgError> {
        check_max_step(x, dx, lo, up)?;
        Ok(P::min(x.len(), |i| step_cap(x[i], dx[i], lo[i], up[i], tau)).min(1.0))
    }

    fn gemv(
        &self,
        beta: f64,
        y: &mut [f64],
        alpha: f64,
        a: &DenseMatrix,
        x: &[f64],
        transpose: bool,
    ) -> Result<(), LinAlgError> {
        check_gemv(y, a, x, transpose)?;
        if !transpose {
            P::for_each_mut(y, |i, yi| beta * yi + alpha * dot_in_order(a.row(i), x));
        } else {
            P::for_each_mut(y, |j, yj| beta * yj + alpha * column_dot(a, j, x));
        }
        Ok(())
    }

    fn gemm(
        &self,
        beta: f64,
        y: &mut DenseMatrix,
        alpha: f64,
        a: &DenseMatrix,
        x: &DenseMatrix,
    ) -> Result<(), LinAlgError> {
        check_gemm(y, a, x)?;
        let width = y.cols();
        P::for_each_chunk(y.as_mut_slice(), width.max(1), |i, yrow| {
            gemm_row(yrow, beta, alpha, a.row(i), x);
        });
        Ok(())
    }

    fn triplet_times_vec(
        &self,
        beta: f64,
        y: &mut [f64],
        alpha: f64,
        a: &TripletMatrix,
        x: &[f64],
        transpose: bool,
    ) -> Result<(), LinAlgError> {
        check_triplet_vec(y, a, x, transpose)?;
        triplet_scatter(beta, y, alpha, a, x, transpose);
        Ok(())
    }

    fn mds_times_vec(
        &self,
        beta: f64,
        y: &mut [f64],
        alpha: f64,
        jsp: &TripletMatrix,
        jde: &DenseMatrix,
        x: &[f64],
    ) -> Result<(), LinAlgError> {
        check_mds_vec(y, jsp, jde, x)?;
        let (xs, xd) = x.split_at(jsp.cols());
        triplet_scatter(beta, y, alpha, jsp, xs, false);
        self.gemv(1.0, y, alpha, jde, xd, false)
    }

    fn fused_add_sdst(
        &self,
        m: &mut DenseMatrix,
        a: &TripletMatrix,
        d: &[f64],
        b: &TripletMatrix,
        sign: f64,
    ) -> Result<(), LinAlgError> {
        check_fused(m, a, d, b)?;
        fused_sandwich(m, a, d, b, sign);
        Ok(())
    }
}
