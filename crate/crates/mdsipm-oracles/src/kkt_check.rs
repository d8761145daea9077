//! Independent KKT residual check at a returned iterate, written with plain
//! dense arithmetic so it shares nothing with the solver's own optimality
//! error computation.

use mdsipm::ipm::IteratePoint;
use mdsipm::is_finite_bound;
use mdsipm::nlp::{EvalBundle, MdsProblem};

/// Unscaled residual norms of the (mu = 0) KKT conditions.
#[derive(Clone, Copy, Debug, Default)]
pub struct KktResidualNorms {
    /// Infinity norm of the stationarity residuals over `x_d`, `x_s`, `s`.
    pub stationarity: f64,
    /// Infinity norm of constraint and bound violations.
    pub primal: f64,
    /// Largest complementarity product `distance * dual`.
    pub complementarity: f64,
    /// Most negative bound dual (zero when all are nonnegative).
    pub dual_sign: f64,
}

impl KktResidualNorms {
    pub fn max(&self) -> f64 {
        self.stationarity
            .max(self.primal)
            .max(self.complementarity)
            .max(-self.dual_sign)
    }
}

pub fn check_kkt(p: &dyn MdsProblem, pt: &IteratePoint) -> KktResidualNorms {
    let dims = p.dims();
    let bounds = p.bounds();
    let mut bundle = EvalBundle::new(&dims);
    p.objective_grad(&pt.xd, &pt.xs, &mut bundle.grad_d, &mut bundle.grad_s);
    p.eq_constraints(&pt.xd, &pt.xs, &mut bundle.g_val);
    p.ineq_constraints(&pt.xd, &pt.xs, &mut bundle.h_val);
    p.jacobians(&pt.xd, &pt.xs, &mut bundle.jac);

    let mut out = KktResidualNorms::default();

    // stationarity, dense block
    for i in 0..dims.n_d {
        let mut r = bundle.grad_d[i] - pt.z_lo_d[i] + pt.z_up_d[i];
        for (row, &y) in pt.y_g.iter().enumerate() {
            r += bundle.jac.jdg.get(row, i) * y;
        }
        for (row, &y) in pt.y_h.iter().enumerate() {
            r += bundle.jac.jdh.get(row, i) * y;
        }
        out.stationarity = out.stationarity.max(r.abs());
    }
    // stationarity, sparse block
    let mut rs: Vec<f64> = (0..dims.n_s)
        .map(|i| bundle.grad_s[i] - pt.z_lo_s[i] + pt.z_up_s[i])
        .collect();
    for (i, j, v) in bundle.jac.jsg.iter() {
        rs[j] += v * pt.y_g[i];
    }
    for (i, j, v) in bundle.jac.jsh.iter() {
        rs[j] += v * pt.y_h[i];
    }
    for r in &rs {
        out.stationarity = out.stationarity.max(r.abs());
    }
    // stationarity, slack rows
    for i in 0..dims.m_i {
        out.stationarity = out
            .stationarity
            .max((-pt.y_h[i] - pt.v_lo[i] + pt.v_up[i]).abs());
    }

    // primal feasibility
    for (g, ge) in bundle.g_val.iter().zip(p.eq_rhs()) {
        out.primal = out.primal.max((g - ge).abs());
    }
    for (h, s) in bundle.h_val.iter().zip(&pt.s) {
        out.primal = out.primal.max((h - s).abs());
    }
    let mut bounds_scan = |x: &[f64], lo: &[f64], up: &[f64], z_lo: &[f64], z_up: &[f64]| {
        for i in 0..x.len() {
            if is_finite_bound(lo[i]) {
                out.primal = out.primal.max(lo[i] - x[i]);
                out.complementarity = out.complementarity.max(((x[i] - lo[i]) * z_lo[i]).abs());
                out.dual_sign = out.dual_sign.min(z_lo[i]);
            }
            if is_finite_bound(up[i]) {
                out.primal = out.primal.max(x[i] - up[i]);
                out.complementarity = out.complementarity.max(((up[i] - x[i]) * z_up[i]).abs());
                out.dual_sign = out.dual_sign.min(z_up[i]);
            }
        }
    };
    bounds_scan(&pt.xd, &bounds.xd_lo, &bounds.xd_up, &pt.z_lo_d, &pt.z_up_d);
    bounds_scan(&pt.xs, &bounds.xs_lo, &bounds.xs_up, &pt.z_lo_s, &pt.z_up_s);
    bounds_scan(&pt.s, &bounds.h_lo, &bounds.h_up, &pt.v_lo, &pt.v_up);

    out
}
