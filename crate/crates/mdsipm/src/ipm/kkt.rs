//! Assembly of the 4x4-block barrier KKT system and its compression, by
//! elimination of the sparse variable block, into the dense symmetric
//! system that actually gets factorized.
//!
//! The full system, for the step `(Δx_s, Δx_d, Δy_g, Δy_h)`, is
//!
//! ```text
//!   [ Q_s   0    Jsgᵀ   Jshᵀ  ] [Δx_s]   [r_xs]
//!   [ 0    Q_d   Jdgᵀ   Jdhᵀ  ] [Δx_d]   [r_xd]
//!   [ Jsg  Jdg  -δc I    0    ] [Δy_g] = [r_yg]
//!   [ Jsh  Jdh    0   -Dh⁻¹-δc] [Δy_h]   [r_yh]
//! ```
//!
//! with `Q_s = qss + D_xs + δw` diagonal and `Q_d = Qdd + D_xd + δw I`.
//! Eliminating `Δx_s` leaves the compressed matrix
//!
//! ```text
//!   [ Q_d    Jdgᵀ                Jdhᵀ              ]
//!   [ Jdg   -Jsg Q_s⁻¹ Jsgᵀ-δc  -Jsg Q_s⁻¹ Jshᵀ    ]
//!   [ Jdh   -Jsh Q_s⁻¹ Jsgᵀ     -Jsh Q_s⁻¹ Jshᵀ-Dh⁻¹-δc ]
//! ```
//!
//! whose sandwich blocks are built with the fused `M += A diag(d) Bᵀ`
//! kernel, one fused pass per block.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::ipm::point::IteratePoint;
use crate::is_finite_bound;
use crate::linalg::{DenseMatrix, Kernels, TripletMatrix};
use crate::nlp::{Dims, EvalBundle, ProblemBounds};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KktError {
    #[error("point not strictly interior at {what} component {index}")]
    NotInterior { what: &'static str, index: usize },
    #[error("nonpositive sparse Hessian pivot q_ss[{index}] = {value} after regularization")]
    NonPositiveQss { index: usize, value: f64 },
    #[error("kernel failure during KKT assembly: {0}")]
    Kernel(crate::linalg::LinAlgError),
}

impl From<crate::linalg::LinAlgError> for KktError {
    fn from(e: crate::linalg::LinAlgError) -> Self {
        KktError::Kernel(e)
    }
}

/// Log-barrier diagonals `D_xs`, `D_xd` and `D_h`, built from bound duals
/// over distances to finite bounds. `dh` is strictly positive because every
/// inequality keeps at least one finite side.
#[derive(Clone, Debug)]
pub struct Diagonals {
    pub d_xd: Vec<f64>,
    pub d_xs: Vec<f64>,
    pub dh: Vec<f64>,
}

fn barrier_diag(
    what: &'static str,
    x: &[f64],
    lo: &[f64],
    up: &[f64],
    z_lo: &[f64],
    z_up: &[f64],
) -> Result<Vec<f64>, KktError> {
    let mut d = vec![0.0; x.len()];
    for i in 0..x.len() {
        if is_finite_bound(lo[i]) {
            let dist = x[i] - lo[i];
            if dist <= 0.0 {
                return Err(KktError::NotInterior { what, index: i });
            }
            d[i] += z_lo[i] / dist;
        }
        if is_finite_bound(up[i]) {
            let dist = up[i] - x[i];
            if dist <= 0.0 {
                return Err(KktError::NotInterior { what, index: i });
            }
            d[i] += z_up[i] / dist;
        }
    }
    Ok(d)
}

/// Builds the barrier diagonals at a strictly interior point.
pub fn build_diagonals(bounds: &ProblemBounds, pt: &IteratePoint) -> Result<Diagonals, KktError> {
    Ok(Diagonals {
        d_xd: barrier_diag(
            "dense variable",
            &pt.xd,
            &bounds.xd_lo,
            &bounds.xd_up,
            &pt.z_lo_d,
            &pt.z_up_d,
        )?,
        d_xs: barrier_diag(
            "sparse variable",
            &pt.xs,
            &bounds.xs_lo,
            &bounds.xs_up,
            &pt.z_lo_s,
            &pt.z_up_s,
        )?,
        dh: barrier_diag("slack", &pt.s, &bounds.h_lo, &bounds.h_up, &pt.v_lo, &pt.v_up)?,
    })
}

/// Right-hand sides of the 4x4 system, plus the eliminated slack-row
/// residual `r_s` needed to recover `Δs`.
#[derive(Clone, Debug)]
pub struct KktResiduals {
    pub r_xd: Vec<f64>,
    pub r_xs: Vec<f64>,
    pub r_yg: Vec<f64>,
    pub r_yh: Vec<f64>,
    /// `r_s = y_h + mu/(s - h_lo) - mu/(h_up - s)`, the negated slack
    /// stationarity of the barrier Lagrangian.
    pub r_s: Vec<f64>,
}

/// Subtracts the barrier gradient terms `-mu/dist_lo + mu/dist_up` in place.
fn add_barrier_grad(t: &mut [f64], x: &[f64], lo: &[f64], up: &[f64], mu: f64) {
    for i in 0..t.len() {
        if is_finite_bound(lo[i]) {
            t[i] -= mu / (x[i] - lo[i]);
        }
        if is_finite_bound(up[i]) {
            t[i] += mu / (up[i] - x[i]);
        }
    }
}

/// Assembles the Newton right-hand side from the barrier-KKT residuals at
/// `(pt, mu)`:
///
/// - `r_xd = -(∇_d f + Jdgᵀ y_g + Jdhᵀ y_h - mu/(x_d-lo) + mu/(up-x_d))`
/// - `r_xs` analogously with the triplet Jacobians,
/// - `r_yg = -(g(x) - g_E)`,
/// - `r_yh = -(h(x) - s) + Dh⁻¹ r_s`.
pub fn build_residuals(
    bundle: &EvalBundle,
    bounds: &ProblemBounds,
    g_rhs: &[f64],
    pt: &IteratePoint,
    mu: f64,
    dh: &[f64],
    kernels: &dyn Kernels,
) -> Result<KktResiduals, KktError> {
    let mut r_xd = bundle.grad_d.clone();
    kernels.gemv(1.0, &mut r_xd, 1.0, &bundle.jac.jdg, &pt.y_g, true)?;
    kernels.gemv(1.0, &mut r_xd, 1.0, &bundle.jac.jdh, &pt.y_h, true)?;
    add_barrier_grad(&mut r_xd, &pt.xd, &bounds.xd_lo, &bounds.xd_up, mu);
    for v in r_xd.iter_mut() {
        *v = -*v;
    }

    let mut r_xs = bundle.grad_s.clone();
    kernels.triplet_times_vec(1.0, &mut r_xs, 1.0, &bundle.jac.jsg, &pt.y_g, true)?;
    kernels.triplet_times_vec(1.0, &mut r_xs, 1.0, &bundle.jac.jsh, &pt.y_h, true)?;
    add_barrier_grad(&mut r_xs, &pt.xs, &bounds.xs_lo, &bounds.xs_up, mu);
    for v in r_xs.iter_mut() {
        *v = -*v;
    }

    let r_yg: Vec<f64> = bundle
        .g_val
        .iter()
        .zip(g_rhs)
        .map(|(&g, &ge)| -(g - ge))
        .collect();

    let mut r_s = pt.y_h.clone();
    add_barrier_grad(&mut r_s, &pt.s, &bounds.h_lo, &bounds.h_up, -mu);

    let r_yh: Vec<f64> = (0..pt.s.len())
        .map(|i| -(bundle.h_val[i] - pt.s[i]) + r_s[i] / dh[i])
        .collect();

    Ok(KktResiduals {
        r_xd,
        r_xs,
        r_yg,
        r_yh,
        r_s,
    })
}

/// The regularized 4x4-block KKT system. Jacobians are borrowed from the
/// evaluation bundle; regularized diagonals are owned.
#[derive(Clone, Debug)]
pub struct KktSystem4<'a> {
    /// Diagonal of `Q_s = qss + D_xs + δw`, strictly positive.
    pub q_ss: Vec<f64>,
    /// `Q_d = Qdd + diag(D_xd) + δw I`.
    pub qdd: DenseMatrix,
    pub jsg: &'a TripletMatrix,
    pub jsh: &'a TripletMatrix,
    pub jdg: &'a DenseMatrix,
    pub jdh: &'a DenseMatrix,
    /// Diagonal `D_h`, strictly positive.
    pub dh: &'a [f64],
    pub r_xs: &'a [f64],
    pub r_xd: &'a [f64],
    pub r_yg: &'a [f64],
    pub r_yh: &'a [f64],
    pub delta_w: f64,
    pub delta_c: f64,
}

impl KktSystem4<'_> {
    pub fn dims(&self) -> Dims {
        Dims {
            n_d: self.qdd.rows(),
            n_s: self.q_ss.len(),
            m_e: self.jsg.rows(),
            m_i: self.jsh.rows(),
        }
    }

    /// Densifies the full 4x4-block matrix with the regularizations folded
    /// in. Oracle-testing and dump aid.
    pub fn to_dense(&self) -> DenseMatrix {
        let d = self.dims();
        let (ns, nd, me, mi) = (d.n_s, d.n_d, d.m_e, d.m_i);
        let n = d.full_dim();
        let (o_xd, o_yg, o_yh) = (ns, ns + nd, ns + nd + me);
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..ns {
            m.set(i, i, self.q_ss[i]);
        }
        for i in 0..nd {
            for j in 0..nd {
                m.set(o_xd + i, o_xd + j, self.qdd.get(i, j));
            }
        }
        for (i, j, v) in self.jsg.iter() {
            m.add_at(o_yg + i, j, v);
            m.add_at(j, o_yg + i, v);
        }
        for (i, j, v) in self.jsh.iter() {
            m.add_at(o_yh + i, j, v);
            m.add_at(j, o_yh + i, v);
        }
        for i in 0..me {
            for j in 0..nd {
                let v = self.jdg.get(i, j);
                m.set(o_yg + i, o_xd + j, v);
                m.set(o_xd + j, o_yg + i, v);
            }
        }
        for i in 0..mi {
            for j in 0..nd {
                let v = self.jdh.get(i, j);
                m.set(o_yh + i, o_xd + j, v);
                m.set(o_xd + j, o_yh + i, v);
            }
        }
        for i in 0..me {
            m.set(o_yg + i, o_yg + i, -self.delta_c);
        }
        for i in 0..mi {
            m.set(o_yh + i, o_yh + i, -1.0 / self.dh[i] - self.delta_c);
        }
        m
    }

    /// Stacked right-hand side in `(x_s, x_d, y_g, y_h)` order.
    pub fn rhs_full(&self) -> Vec<f64> {
        let mut r = Vec::with_capacity(self.dims().full_dim());
        r.extend_from_slice(self.r_xs);
        r.extend_from_slice(self.r_xd);
        r.extend_from_slice(self.r_yg);
        r.extend_from_slice(self.r_yh);
        r
    }
}

/// Assembles [`KktSystem4`] instances for varying regularizations out of one
/// evaluation. The inertia-correction loop rebuilds cheaply per trial.
pub struct KktBuilder<'a> {
    pub bundle: &'a EvalBundle,
    pub diagonals: &'a Diagonals,
    pub residuals: &'a KktResiduals,
}

impl<'a> KktBuilder<'a> {
    pub fn new(
        bundle: &'a EvalBundle,
        diagonals: &'a Diagonals,
        residuals: &'a KktResiduals,
    ) -> Self {
        Self {
            bundle,
            diagonals,
            residuals,
        }
    }

    /// Builds the system for regularization `(delta_w, delta_c)`. Fails if
    /// any regularized sparse pivot is nonpositive.
    pub fn build(&self, delta_w: f64, delta_c: f64) -> Result<KktSystem4<'a>, KktError> {
        let mut q_ss = self.bundle.qss.clone();
        for (i, q) in q_ss.iter_mut().enumerate() {
            *q += self.diagonals.d_xs[i] + delta_w;
            if *q <= 0.0 {
                return Err(KktError::NonPositiveQss {
                    index: i,
                    value: *q,
                });
            }
        }
        let mut qdd = self.bundle.qdd.clone();
        for i in 0..qdd.rows() {
            qdd.add_at(i, i, self.diagonals.d_xd[i] + delta_w);
        }
        Ok(KktSystem4 {
            q_ss,
            qdd,
            jsg: &self.bundle.jac.jsg,
            jsh: &self.bundle.jac.jsh,
            jdg: &self.bundle.jac.jdg,
            jdh: &self.bundle.jac.jdh,
            dh: &self.diagonals.dh,
            r_xs: &self.residuals.r_xs,
            r_xd: &self.residuals.r_xd,
            r_yg: &self.residuals.r_yg,
            r_yh: &self.residuals.r_yh,
            delta_w,
            delta_c,
        })
    }
}

/// The compressed dense KKT system of dimension `n_d + m_E + m_I`, stored
/// symmetric full, with unknown order `(Δx_d, Δy_g, Δy_h)`.
#[derive(Clone, Debug)]
pub struct CompressedKkt {
    pub m: DenseMatrix,
    pub rhs: Vec<f64>,
    pub n_d: usize,
    pub m_e: usize,
    pub m_i: usize,
}

impl CompressedKkt {
    pub fn dim(&self) -> usize {
        self.n_d + self.m_e + self.m_i
    }

    /// Offsets of the `(x_d, y_g, y_h)` blocks.
    pub fn offsets(&self) -> (usize, usize, usize) {
        (0, self.n_d, self.n_d + self.m_e)
    }
}

/// Eliminates the sparse block: builds the compressed matrix and right-hand
/// side. The three sandwich blocks are formed with one fused
/// `M += A diag(d) Bᵀ` pass each.
pub fn compress(k4: &KktSystem4<'_>, kernels: &dyn Kernels) -> Result<CompressedKkt, KktError> {
    let d = k4.dims();
    let (nd, me, mi) = (d.n_d, d.m_e, d.m_i);
    let dim = nd + me + mi;
    let (o_yg, o_yh) = (nd, nd + me);

    let mut qinv = vec![0.0; k4.q_ss.len()];
    for (i, (&q, qi)) in k4.q_ss.iter().zip(qinv.iter_mut()).enumerate() {
        if q <= 0.0 {
            return Err(KktError::NonPositiveQss { index: i, value: q });
        }
        *qi = 1.0 / q;
    }

    let mut m = DenseMatrix::zeros(dim, dim);

    // (1,1) dense Hessian block and the dense Jacobian borders.
    m.set_block(0, 0, &k4.qdd);
    for i in 0..me {
        for j in 0..nd {
            let v = k4.jdg.get(i, j);
            m.set(o_yg + i, j, v);
            m.set(j, o_yg + i, v);
        }
    }
    for i in 0..mi {
        for j in 0..nd {
            let v = k4.jdh.get(i, j);
            m.set(o_yh + i, j, v);
            m.set(j, o_yh + i, v);
        }
    }

    // (2,2) = -Jsg Q_s⁻¹ Jsgᵀ - δc I
    let mut b_gg = DenseMatrix::zeros(me, me);
    for i in 0..me {
        b_gg.set(i, i, -k4.delta_c);
    }
    kernels.fused_add_sdst(&mut b_gg, k4.jsg, &qinv, k4.jsg, -1.0)?;
    m.set_block(o_yg, o_yg, &b_gg);

    // (2,3) = -Jsg Q_s⁻¹ Jshᵀ and its transpose
    let mut b_gh = DenseMatrix::zeros(me, mi);
    kernels.fused_add_sdst(&mut b_gh, k4.jsg, &qinv, k4.jsh, -1.0)?;
    m.set_block(o_yg, o_yh, &b_gh);
    m.set_block(o_yh, o_yg, &b_gh.transposed());

    // (3,3) = -Jsh Q_s⁻¹ Jshᵀ - Dh⁻¹ - δc I
    let mut b_hh = DenseMatrix::zeros(mi, mi);
    for i in 0..mi {
        b_hh.set(i, i, -1.0 / k4.dh[i] - k4.delta_c);
    }
    kernels.fused_add_sdst(&mut b_hh, k4.jsh, &qinv, k4.jsh, -1.0)?;
    m.set_block(o_yh, o_yh, &b_hh);

    // rhs = (r_xd, r_yg - Jsg Q_s⁻¹ r_xs, r_yh - Jsh Q_s⁻¹ r_xs)
    let w: Vec<f64> = k4
        .r_xs
        .iter()
        .zip(&qinv)
        .map(|(&r, &qi)| r * qi)
        .collect();
    let mut rhs = vec![0.0; dim];
    rhs[..nd].copy_from_slice(k4.r_xd);
    rhs[o_yg..o_yg + me].copy_from_slice(k4.r_yg);
    kernels.triplet_times_vec(1.0, &mut rhs[o_yg..o_yg + me], -1.0, k4.jsg, &w, false)?;
    rhs[o_yh..o_yh + mi].copy_from_slice(k4.r_yh);
    kernels.triplet_times_vec(1.0, &mut rhs[o_yh..o_yh + mi], -1.0, k4.jsh, &w, false)?;

    Ok(CompressedKkt {
        m,
        rhs,
        n_d: nd,
        m_e: me,
        m_i: mi,
    })
}

/// Back-substitution for the eliminated sparse block:
/// `Δx_s = Q_s⁻¹ (r_xs - Jsgᵀ Δy_g - Jshᵀ Δy_h)`.
pub fn recover_sparse_step(
    k4: &KktSystem4<'_>,
    dy_g: &[f64],
    dy_h: &[f64],
    kernels: &dyn Kernels,
) -> Result<Vec<f64>, KktError> {
    let mut t = k4.r_xs.to_vec();
    kernels.triplet_times_vec(1.0, &mut t, -1.0, k4.jsg, dy_g, true)?;
    kernels.triplet_times_vec(1.0, &mut t, -1.0, k4.jsh, dy_h, true)?;
    for (ti, &q) in t.iter_mut().zip(&k4.q_ss) {
        *ti /= q;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ReferenceKernels;
    use alloc::vec::Vec;

    struct Fixture {
        jsg: TripletMatrix,
        jsh: TripletMatrix,
        jdg: DenseMatrix,
        jdh: DenseMatrix,
        dh: Vec<f64>,
        r: [Vec<f64>; 4],
    }

    impl Fixture {
        // Scalar blocks: Q_s=[2], Q_d=[3], Jsg=[1], Jdg=[1], Jsh=[1], Jdh=[0], Dh=[1].
        fn scalar_blocks() -> Self {
            Fixture {
                jsg: TripletMatrix::from_entries(1, 1, &[(0, 0, 1.0)]),
                jsh: TripletMatrix::from_entries(1, 1, &[(0, 0, 1.0)]),
                jdg: DenseMatrix::from_rows(&[&[1.0]]),
                jdh: DenseMatrix::from_rows(&[&[0.0]]),
                dh: vec![1.0],
                r: [vec![0.0], vec![0.0], vec![0.0], vec![0.0]],
            }
        }

        fn k4(&self, q_ss: f64, q_dd: f64, delta_w: f64, delta_c: f64) -> KktSystem4<'_> {
            KktSystem4 {
                q_ss: vec![q_ss],
                qdd: DenseMatrix::from_rows(&[&[q_dd]]),
                jsg: &self.jsg,
                jsh: &self.jsh,
                jdg: &self.jdg,
                jdh: &self.jdh,
                dh: &self.dh,
                r_xs: &self.r[0],
                r_xd: &self.r[1],
                r_yg: &self.r[2],
                r_yh: &self.r[3],
                delta_w,
                delta_c,
            }
        }
    }

    #[test]
    fn dense_form_of_scalar_block_system() {
        let fx = Fixture::scalar_blocks();
        let k4 = fx.k4(2.0, 3.0, 0.0, 0.0);
        let expect = DenseMatrix::from_rows(&[
            &[2.0, 0.0, 1.0, 1.0],
            &[0.0, 3.0, 1.0, 0.0],
            &[1.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, -1.0],
        ]);
        assert_eq!(k4.to_dense(), expect);
    }

    #[test]
    fn delta_c_fills_equality_diagonal() {
        let fx = Fixture::scalar_blocks();
        let k4 = fx.k4(2.0, 3.0, 0.0, 1.0);
        let d = k4.to_dense();
        assert_eq!(d.get(2, 2), -1.0);
        assert_eq!(d.get(3, 3), -2.0); // -1/dh - delta_c
    }

    #[test]
    fn compress_scalar_block_system() {
        let fx = Fixture::scalar_blocks();
        let k4 = fx.k4(2.0, 3.0, 0.0, 0.0);
        let c = compress(&k4, &ReferenceKernels).unwrap();
        assert_eq!(c.dim(), 3);
        let expect = DenseMatrix::from_rows(&[
            &[3.0, 1.0, 0.0],
            &[1.0, -0.5, -0.5],
            &[0.0, -0.5, -1.5],
        ]);
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (c.m.get(i, j) - expect.get(i, j)).abs() < 1e-15,
                    "({i},{j}): {} vs {}",
                    c.m.get(i, j),
                    expect.get(i, j)
                );
            }
        }
    }

    #[test]
    fn compress_without_sparse_coupling() {
        // Jsg = Jsh = 0: the (2,2) block is -delta_c I, (3,3) is -Dh^-1 - delta_c I.
        let fx = Fixture {
            jsg: TripletMatrix::new(1, 1),
            jsh: TripletMatrix::new(1, 1),
            ..Fixture::scalar_blocks()
        };
        let k4 = fx.k4(2.0, 3.0, 0.0, 0.25);
        let c = compress(&k4, &ReferenceKernels).unwrap();
        assert_eq!(c.m.get(1, 1), -0.25);
        assert_eq!(c.m.get(2, 2), -1.25);
        assert_eq!(c.m.get(1, 2), 0.0);
    }

    #[test]
    fn builder_applies_regularization() {
        use crate::nlp::{Dims, EvalBundle};
        let dims = Dims {
            n_d: 1,
            n_s: 1,
            m_e: 1,
            m_i: 1,
        };
        let mut bundle = EvalBundle::new(&dims);
        bundle.qss[0] = 2.0;
        bundle.qdd.set(0, 0, 3.0);
        let diagonals = Diagonals {
            d_xd: vec![0.0],
            d_xs: vec![0.0],
            dh: vec![1.0],
        };
        let residuals = KktResiduals {
            r_xd: vec![0.0],
            r_xs: vec![0.0],
            r_yg: vec![0.0],
            r_yh: vec![0.0],
            r_s: vec![0.0],
        };
        let builder = KktBuilder::new(&bundle, &diagonals, &residuals);
        let k4 = builder.build(5.0, 1.0).unwrap();
        assert_eq!(k4.q_ss, vec![7.0]);
        assert_eq!(k4.qdd.get(0, 0), 8.0);
        assert_eq!(k4.delta_c, 1.0);

        // q_ss driven nonpositive is an assembly error
        let mut bad = bundle.clone();
        bad.qss[0] = 0.0;
        let bad_builder = KktBuilder::new(&bad, &diagonals, &residuals);
        assert!(matches!(
            bad_builder.build(0.0, 0.0),
            Err(KktError::NonPositiveQss { index: 0, .. })
        ));
    }

    #[test]
    fn recover_without_coupling_divides_by_qss() {
        let fx = Fixture {
            jsg: TripletMatrix::new(1, 1),
            jsh: TripletMatrix::new(1, 1),
            r: [vec![3.0], vec![0.0], vec![0.0], vec![0.0]],
            ..Fixture::scalar_blocks()
        };
        let k4 = fx.k4(2.0, 3.0, 0.0, 0.0);
        let dxs = recover_sparse_step(&k4, &[0.5], &[0.5], &ReferenceKernels).unwrap();
        assert_eq!(dxs, vec![1.5]);

        // zero residual, zero multiplier step: zero sparse step
        let fx0 = Fixture::scalar_blocks();
        let k40 = fx0.k4(2.0, 3.0, 0.0, 0.0);
        let dxs = recover_sparse_step(&k40, &[0.0], &[0.0], &ReferenceKernels).unwrap();
        assert_eq!(dxs, vec![0.0]);
    }
}
