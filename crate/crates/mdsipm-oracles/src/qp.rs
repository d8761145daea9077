//! Reference solver for small convex QPs with linear constraints: active-set
//! enumeration over the one-sided inequality constraints, each candidate
//! resolved through a dense KKT solve.
//!
//! Exponential in the constraint count, which is the point: no descent
//! logic, no tolerance tuning, just the optimality conditions checked
//! exhaustively. Usable only at small scale.

use mdsipm::ipm::IteratePoint;
use mdsipm::is_finite_bound;
use mdsipm::nlp::{EvalBundle, MdsProblem};
use mdsipm::DenseMatrix;

use crate::dense::lu_solve;

/// `min ½ zᵀHz + cᵀz  s.t.  A_eq z = b_eq,  A_in z <= b_in`.
#[derive(Clone, Debug)]
pub struct DenseQp {
    pub h: DenseMatrix,
    pub c: Vec<f64>,
    pub a_eq: DenseMatrix,
    pub b_eq: Vec<f64>,
    pub a_in: DenseMatrix,
    pub b_in: Vec<f64>,
}

/// Where a one-sided inequality row of the densified QP came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IneqSource {
    HUpper(usize),
    HLower(usize),
    XdUpper(usize),
    XdLower(usize),
    XsUpper(usize),
    XsLower(usize),
}

#[derive(Clone, Debug)]
pub struct QpSolution {
    pub z: Vec<f64>,
    pub eq_mult: Vec<f64>,
    /// One multiplier per inequality row, zero when inactive.
    pub in_mult: Vec<f64>,
    pub objective: f64,
}

/// Densifies a *linear-constraint quadratic* MDS problem into [`DenseQp`]
/// form with variable order `z = (x_d, x_s)`. Evaluations happen at the
/// origin, which is exact for this problem class.
pub fn dense_qp_from_mds(p: &dyn MdsProblem) -> (DenseQp, Vec<IneqSource>) {
    let dims = p.dims();
    let bounds = p.bounds();
    let n = dims.n();
    let (nd, ns) = (dims.n_d, dims.n_s);
    let xd0 = vec![0.0; nd];
    let xs0 = vec![0.0; ns];
    let mut bundle = EvalBundle::new(&dims);

    p.lagrangian_hessian(
        &xd0,
        &xs0,
        &vec![0.0; dims.m_e],
        &vec![0.0; dims.m_i],
        &mut bundle.qdd,
        &mut bundle.qss,
    );
    let mut h = DenseMatrix::zeros(n, n);
    for i in 0..nd {
        for j in 0..nd {
            h.set(i, j, bundle.qdd.get(i, j));
        }
    }
    for i in 0..ns {
        h.set(nd + i, nd + i, bundle.qss[i]);
    }

    p.objective_grad(&xd0, &xs0, &mut bundle.grad_d, &mut bundle.grad_s);
    let mut c = vec![0.0; n];
    c[..nd].copy_from_slice(&bundle.grad_d);
    c[nd..].copy_from_slice(&bundle.grad_s);

    p.jacobians(&xd0, &xs0, &mut bundle.jac);
    let mut a_eq = DenseMatrix::zeros(dims.m_e, n);
    for r in 0..dims.m_e {
        for j in 0..nd {
            a_eq.set(r, j, bundle.jac.jdg.get(r, j));
        }
    }
    for (i, j, v) in bundle.jac.jsg.iter() {
        a_eq.add_at(i, nd + j, v);
    }
    let b_eq = p.eq_rhs().to_vec();

    let mut h_rows = DenseMatrix::zeros(dims.m_i, n);
    for r in 0..dims.m_i {
        for j in 0..nd {
            h_rows.set(r, j, bundle.jac.jdh.get(r, j));
        }
    }
    for (i, j, v) in bundle.jac.jsh.iter() {
        h_rows.add_at(i, nd + j, v);
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut sources: Vec<IneqSource> = Vec::new();
    for i in 0..dims.m_i {
        if is_finite_bound(bounds.h_up[i]) {
            rows.push(h_rows.row(i).to_vec());
            rhs.push(bounds.h_up[i]);
            sources.push(IneqSource::HUpper(i));
        }
        if is_finite_bound(bounds.h_lo[i]) {
            rows.push(h_rows.row(i).iter().map(|v| -v).collect());
            rhs.push(-bounds.h_lo[i]);
            sources.push(IneqSource::HLower(i));
        }
    }
    let mut unit = |col: usize, sign: f64, b: f64, src: IneqSource| {
        let mut row = vec![0.0; n];
        row[col] = sign;
        rows.push(row);
        rhs.push(b);
        sources.push(src);
    };
    for j in 0..nd {
        if is_finite_bound(bounds.xd_up[j]) {
            unit(j, 1.0, bounds.xd_up[j], IneqSource::XdUpper(j));
        }
        if is_finite_bound(bounds.xd_lo[j]) {
            unit(j, -1.0, -bounds.xd_lo[j], IneqSource::XdLower(j));
        }
    }
    for j in 0..ns {
        if is_finite_bound(bounds.xs_up[j]) {
            unit(nd + j, 1.0, bounds.xs_up[j], IneqSource::XsUpper(j));
        }
        if is_finite_bound(bounds.xs_lo[j]) {
            unit(nd + j, -1.0, -bounds.xs_lo[j], IneqSource::XsLower(j));
        }
    }

    let mut a_in = DenseMatrix::zeros(rows.len(), n);
    for (r, row) in rows.iter().enumerate() {
        a_in.row_mut(r).copy_from_slice(row);
    }
    (
        DenseQp {
            h,
            c,
            a_eq,
            b_eq,
            a_in,
            b_in: rhs,
        },
        sources,
    )
}

/// Visits all `k`-element index combinations of `0..m` until the callback
/// returns `Some`.
fn first_combination<T>(
    m: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if k > m {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(t) = f(&idx) {
            return Some(t);
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Solves the QP by enumerating candidate active sets of the inequality
/// rows, solving each equality-constrained KKT system densely, and
/// returning the first candidate that is primal and dual feasible within
/// `tol`. Returns `None` if no candidate passes (infeasible problem or
/// active set larger than `n - m_eq`).
pub fn solve_by_enumeration(qp: &DenseQp, tol: f64) -> Option<QpSolution> {
    let n = qp.c.len();
    let m_eq = qp.b_eq.len();
    let m_in = qp.b_in.len();
    let max_active = n.saturating_sub(m_eq);

    for size in 0..=max_active.min(m_in) {
        let found = first_combination(m_in, size, |active| {
            let dim = n + m_eq + size;
            let mut kkt = DenseMatrix::zeros(dim, dim);
            let mut rhs = vec![0.0; dim];
            for i in 0..n {
                for j in 0..n {
                    kkt.set(i, j, qp.h.get(i, j));
                }
                rhs[i] = -qp.c[i];
            }
            for r in 0..m_eq {
                for j in 0..n {
                    let v = qp.a_eq.get(r, j);
                    kkt.set(n + r, j, v);
                    kkt.set(j, n + r, v);
                }
                rhs[n + r] = qp.b_eq[r];
            }
            for (t, &r) in active.iter().enumerate() {
                for j in 0..n {
                    let v = qp.a_in.get(r, j);
                    kkt.set(n + m_eq + t, j, v);
                    kkt.set(j, n + m_eq + t, v);
                }
                rhs[n + m_eq + t] = qp.b_in[r];
            }

            let sol = lu_solve(&kkt, &rhs)?;
            let z = &sol[..n];
            let mults = &sol[n + m_eq..];
            // dual feasibility of the active multipliers
            if mults.iter().any(|&m| m < -tol) {
                return None;
            }
            // primal feasibility of every inequality
            for r in 0..m_in {
                let mut ax = 0.0;
                for (a, &zj) in qp.a_in.row(r).iter().zip(z) {
                    ax += a * zj;
                }
                if ax > qp.b_in[r] + tol {
                    return None;
                }
            }
            let mut in_mult = vec![0.0; m_in];
            for (t, &r) in active.iter().enumerate() {
                in_mult[r] = mults[t].max(0.0);
            }
            let mut objective = 0.0;
            for i in 0..n {
                let mut hz = 0.0;
                for (a, &zj) in qp.h.row(i).iter().zip(z) {
                    hz += a * zj;
                }
                objective += (0.5 * hz + qp.c[i]) * z[i];
            }
            Some(QpSolution {
                z: z.to_vec(),
                eq_mult: sol[n..n + m_eq].to_vec(),
                in_mult,
                objective,
            })
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Builds the exact-multiplier KKT certificate of a QP solution in the
/// solver's iterate layout: slacks at the constraint values and QP
/// multipliers mapped onto `y_h` and the bound duals.
pub fn certificate_point(
    p: &dyn MdsProblem,
    sol: &QpSolution,
    sources: &[IneqSource],
) -> IteratePoint {
    let dims = p.dims();
    let nd = dims.n_d;
    let mut pt = IteratePoint::zeros(&dims);
    pt.xd.copy_from_slice(&sol.z[..nd]);
    pt.xs.copy_from_slice(&sol.z[nd..]);
    p.ineq_constraints(&pt.xd, &pt.xs, &mut pt.s);
    pt.y_g.copy_from_slice(&sol.eq_mult);
    for (r, &mu) in sol.in_mult.iter().enumerate() {
        if mu == 0.0 {
            continue;
        }
        match sources[r] {
            IneqSource::HUpper(i) => {
                pt.y_h[i] += mu;
                pt.v_up[i] += mu;
            }
            IneqSource::HLower(i) => {
                pt.y_h[i] -= mu;
                pt.v_lo[i] += mu;
            }
            IneqSource::XdUpper(j) => pt.z_up_d[j] += mu,
            IneqSource::XdLower(j) => pt.z_lo_d[j] += mu,
            IneqSource::XsUpper(j) => pt.z_up_s[j] += mu,
            IneqSource::XsLower(j) => pt.z_lo_s[j] += mu,
        }
    }
    pt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_minimum_inside_box() {
        // min (z0-1)^2 + (z1+2)^2 over [-10,10]^2: optimum interior.
        let qp = DenseQp {
            h: DenseMatrix::from_rows(&[&[2.0, 0.0], &[0.0, 2.0]]),
            c: vec![-2.0, 4.0],
            a_eq: DenseMatrix::zeros(0, 2),
            b_eq: vec![],
            a_in: DenseMatrix::from_rows(&[
                &[1.0, 0.0],
                &[-1.0, 0.0],
                &[0.0, 1.0],
                &[0.0, -1.0],
            ]),
            b_in: vec![10.0, 10.0, 10.0, 10.0],
        };
        let sol = solve_by_enumeration(&qp, 1e-9).unwrap();
        assert!((sol.z[0] - 1.0).abs() < 1e-10);
        assert!((sol.z[1] + 2.0).abs() < 1e-10);
        assert!(sol.in_mult.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn active_bound_gets_multiplier() {
        // min ½ z² - 4z s.t. z <= 1: active at z = 1 with multiplier 3.
        let qp = DenseQp {
            h: DenseMatrix::from_rows(&[&[1.0]]),
            c: vec![-4.0],
            a_eq: DenseMatrix::zeros(0, 1),
            b_eq: vec![],
            a_in: DenseMatrix::from_rows(&[&[1.0]]),
            b_in: vec![1.0],
        };
        let sol = solve_by_enumeration(&qp, 1e-9).unwrap();
        assert!((sol.z[0] - 1.0).abs() < 1e-12);
        assert!((sol.in_mult[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn equality_constrained() {
        // min ½(z0² + z1²) s.t. z0 + z1 = 2 -> z = (1,1), lambda = -1.
        let qp = DenseQp {
            h: DenseMatrix::identity(2),
            c: vec![0.0, 0.0],
            a_eq: DenseMatrix::from_rows(&[&[1.0, 1.0]]),
            b_eq: vec![2.0],
            a_in: DenseMatrix::zeros(0, 2),
            b_in: vec![],
        };
        let sol = solve_by_enumeration(&qp, 1e-9).unwrap();
        assert!((sol.z[0] - 1.0).abs() < 1e-12);
        assert!((sol.z[1] - 1.0).abs() < 1e-12);
        assert!((sol.eq_mult[0] + 1.0).abs() < 1e-12);
    }
}
