use alloc::vec;
use alloc::vec::Vec;

use super::{Dims, JacobianBlocks, MdsProblem, ProblemBounds};
use crate::linalg::{DenseMatrix, TripletMatrix};

/// Convex quadratic MDS problem with linear constraints; the carrier for the
/// built-in test problems.
///
/// Objective `½ x_dᵀ H_d x_d + c_dᵀ x_d + ½ Σ q_i x_{s,i}² + c_sᵀ x_s + c0`
/// with separable blocks, so the cross-term Hessians are zero by
/// construction. All constraints are linear, so the Lagrangian Hessian
/// equals the objective Hessian at every multiplier.
#[derive(Clone, Debug)]
pub struct QuadraticProblem {
    dims: Dims,
    bounds: ProblemBounds,
    g_rhs: Vec<f64>,
    hd: DenseMatrix,
    qss: Vec<f64>,
    cd: Vec<f64>,
    cs: Vec<f64>,
    c0: f64,
    jdg: DenseMatrix,
    jsg: TripletMatrix,
    jdh: DenseMatrix,
    jsh: TripletMatrix,
}

impl QuadraticProblem {
    pub fn new(
        dims: Dims,
        bounds: ProblemBounds,
        g_rhs: Vec<f64>,
        hd: DenseMatrix,
        qss: Vec<f64>,
        cd: Vec<f64>,
        cs: Vec<f64>,
        c0: f64,
        jdg: DenseMatrix,
        jsg: TripletMatrix,
        jdh: DenseMatrix,
        jsh: TripletMatrix,
    ) -> Self {
        assert_eq!(hd.rows(), dims.n_d);
        assert_eq!(hd.cols(), dims.n_d);
        assert_eq!(qss.len(), dims.n_s);
        assert_eq!(cd.len(), dims.n_d);
        assert_eq!(cs.len(), dims.n_s);
        assert_eq!(g_rhs.len(), dims.m_e);
        assert_eq!((jdg.rows(), jdg.cols()), (dims.m_e, dims.n_d));
        assert_eq!((jsg.rows(), jsg.cols()), (dims.m_e, dims.n_s));
        assert_eq!((jdh.rows(), jdh.cols()), (dims.m_i, dims.n_d));
        assert_eq!((jsh.rows(), jsh.cols()), (dims.m_i, dims.n_s));
        Self {
            dims,
            bounds,
            g_rhs,
            hd,
            qss,
            cd,
            cs,
            c0,
            jdg,
            jsg,
            jdh,
            jsh,
        }
    }

    pub fn bounds_mut(&mut self) -> &mut ProblemBounds {
        &mut self.bounds
    }

    pub fn dense_hessian(&self) -> &DenseMatrix {
        &self.hd
    }

    pub fn sparse_hessian_diag(&self) -> &[f64] {
        &self.qss
    }

    pub fn linear_terms(&self) -> (&[f64], &[f64], f64) {
        (&self.cd, &self.cs, self.c0)
    }

    fn apply_constraints(
        &self,
        jd: &DenseMatrix,
        js: &TripletMatrix,
        xd: &[f64],
        xs: &[f64],
        out: &mut [f64],
    ) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for (a, &x) in jd.row(r).iter().zip(xd) {
                s += a * x;
            }
            *o = s;
        }
        for (i, j, v) in js.iter() {
            out[i] += v * xs[j];
        }
    }
}

impl MdsProblem for QuadraticProblem {
    fn dims(&self) -> Dims {
        self.dims
    }

    fn bounds(&self) -> &ProblemBounds {
        &self.bounds
    }

    fn eq_rhs(&self) -> &[f64] {
        &self.g_rhs
    }

    fn objective(&self, xd: &[f64], xs: &[f64]) -> f64 {
        let mut val = self.c0;
        for i in 0..self.dims.n_d {
            let mut hx = 0.0;
            for (a, &x) in self.hd.row(i).iter().zip(xd) {
                hx += a * x;
            }
            val += (0.5 * hx + self.cd[i]) * xd[i];
        }
        for i in 0..self.dims.n_s {
            val += (0.5 * self.qss[i] * xs[i] + self.cs[i]) * xs[i];
        }
        val
    }

    fn objective_grad(&self, xd: &[f64], xs: &[f64], grad_d: &mut [f64], grad_s: &mut [f64]) {
        for (i, g) in grad_d.iter_mut().enumerate() {
            let mut hx = 0.0;
            for (a, &x) in self.hd.row(i).iter().zip(xd) {
                hx += a * x;
            }
            *g = hx + self.cd[i];
        }
        for (i, g) in grad_s.iter_mut().enumerate() {
            *g = self.qss[i] * xs[i] + self.cs[i];
        }
    }

    fn eq_constraints(&self, xd: &[f64], xs: &[f64], out: &mut [f64]) {
        self.apply_constraints(&self.jdg, &self.jsg, xd, xs, out);
    }

    fn ineq_constraints(&self, xd: &[f64], xs: &[f64], out: &mut [f64]) {
        self.apply_constraints(&self.jdh, &self.jsh, xd, xs, out);
    }

    fn jacobians(&self, _xd: &[f64], _xs: &[f64], jac: &mut JacobianBlocks) {
        jac.jdg = self.jdg.clone();
        jac.jsg = self.jsg.clone();
        jac.jdh = self.jdh.clone();
        jac.jsh = self.jsh.clone();
    }

    fn lagrangian_hessian(
        &self,
        _xd: &[f64],
        _xs: &[f64],
        _y_g: &[f64],
        _y_h: &[f64],
        qdd: &mut DenseMatrix,
        qss: &mut [f64],
    ) {
        qdd.as_mut_slice().copy_from_slice(self.hd.as_slice());
        qss.copy_from_slice(&self.qss);
    }
}

#[allow(dead_code)]
fn zeros(n: usize) -> Vec<f64> {
    vec![0.0; n]
}
