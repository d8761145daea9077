use alloc::vec;
use alloc::vec::Vec;

use super::kernels::{
    check_axpy, check_dot, check_fused, check_gemm, check_gemv, check_max_step, check_mds_vec,
    check_reduce, check_triplet_vec, step_cap,
};
use super::{DenseMatrix, Kernels, LinAlgError, Reduction, TripletMatrix};

/// Hand-rolled sequential reference suite (the `Default` memory space).
///
/// Every other backend is validated against this one: sequential suites must
/// match it bit-for-bit, parallel suites up to floating-point reduction order.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReferenceKernels;

impl Kernels for ReferenceKernels {
    fn axpy(&self, alpha: f64, x: &[f64], y: &mut [f64]) -> Result<(), LinAlgError> {
        check_axpy(x, y)?;
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi += alpha * xi;
        }
        Ok(())
    }

    fn dot(&self, x: &[f64], y: &[f64]) -> Result<f64, LinAlgError> {
        check_dot(x, y)?;
        Ok(dot_in_order(x, y))
    }

    fn reduce(&self, x: &[f64], kind: Reduction) -> Result<f64, LinAlgError> {
        check_reduce(x, kind)?;
        Ok(match kind {
            Reduction::InfNorm => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            Reduction::OneNorm => x.iter().map(|v| v.abs()).sum(),
            Reduction::TwoNorm => libm::sqrt(x.iter().map(|v| v * v).sum()),
            Reduction::Min => x.iter().copied().fold(f64::INFINITY, f64::min),
            Reduction::Max => x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
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
        let mut alpha: f64 = 1.0;
        for i in 0..x.len() {
            alpha = alpha.min(step_cap(x[i], dx[i], lo[i], up[i], tau));
        }
        Ok(alpha)
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
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = beta * *yi + alpha * dot_in_order(a.row(i), x);
            }
        } else {
            for (j, yj) in y.iter_mut().enumerate() {
                *yj = beta * *yj + alpha * column_dot(a, j, x);
            }
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
        for i in 0..y.rows() {
            gemm_row(y.row_mut(i), beta, alpha, a.row(i), x);
        }
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
        // dense part piles onto the sparse result, accumulation factor 1
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

// Scalar routines shared with the policy-parameterized suite so that every
// sequential backend produces bit-identical results by construction.

#[inline]
pub(super) fn dot_in_order(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        acc += xi * yi;
    }
    acc
}

#[inline]
pub(super) fn column_dot(a: &DenseMatrix, j: usize, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        acc += a.get(i, j) * xi;
    }
    acc
}

#[inline]
pub(super) fn gemm_row(yrow: &mut [f64], beta: f64, alpha: f64, arow: &[f64], x: &DenseMatrix) {
    for yij in yrow.iter_mut() {
        *yij *= beta;
    }
    for (k, &aik) in arow.iter().enumerate() {
        let w = alpha * aik;
        if w != 0.0 {
            for (yij, &xkj) in yrow.iter_mut().zip(x.row(k)) {
                *yij += w * xkj;
            }
        }
    }
}

pub(super) fn triplet_scatter(
    beta: f64,
    y: &mut [f64],
    alpha: f64,
    a: &TripletMatrix,
    x: &[f64],
    transpose: bool,
) {
    for yi in y.iter_mut() {
        *yi *= beta;
    }
    if !transpose {
        for (i, j, v) in a.iter() {
            y[i] += alpha * v * x[j];
        }
    } else {
        for (i, j, v) in a.iter() {
            y[j] += alpha * v * x[i];
        }
    }
}

pub(super) fn fused_sandwich(
    m: &mut DenseMatrix,
    a: &TripletMatrix,
    d: &[f64],
    b: &TripletMatrix,
    sign: f64,
) {
    let groups = InnerIndexGroups::build(b, d.len());
    for (ia, ja, va) in a.iter() {
        let w = sign * va * d[ja];
        if w == 0.0 {
            continue;
        }
        for &k in groups.entries_for(ja) {
            m.add_at(ia, b.row_indices()[k], w * b.values()[k]);
        }
    }
}

/// Entry indices of a triplet matrix grouped by column, so the sandwich
/// product walks only matching inner indices.
struct InnerIndexGroups {
    start: Vec<usize>,
    order: Vec<usize>,
}

impl InnerIndexGroups {
    fn build(b: &TripletMatrix, q: usize) -> Self {
        let mut start = vec![0usize; q + 1];
        for &j in b.col_indices() {
            start[j + 1] += 1;
        }
        for j in 0..q {
            start[j + 1] += start[j];
        }
        let mut order = vec![0usize; b.nnz()];
        let mut next: Vec<usize> = start[..q].to_vec();
        for (k, &j) in b.col_indices().iter().enumerate() {
            order[next[j]] = k;
            next[j] += 1;
        }
        Self { start, order }
    }

    #[inline]
    fn entries_for(&self, j: usize) -> &[usize] {
        &self.order[self.start[j]..self.start[j + 1]]
    }
}
