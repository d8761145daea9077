//! Central finite-difference checks of the model derivatives: objective
//! gradient, constraint Jacobians, and Lagrangian Hessian-vector products.

use mdsipm::is_finite_bound;
use mdsipm::nlp::{EvalBundle, MdsProblem};
use mdsipm::rng::SplitMix64;
use mdsipm::DenseMatrix;

/// Outcome of a finite-difference sweep.
#[derive(Clone, Debug, Default)]
pub struct FdReport {
    pub checks: usize,
    pub failures: Vec<String>,
    pub max_rel_err: f64,
}

impl FdReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sample_interior(rng: &mut SplitMix64, lo: &[f64], up: &[f64]) -> Vec<f64> {
    lo.iter()
        .zip(up)
        .map(|(&l, &u)| match (is_finite_bound(l), is_finite_bound(u)) {
            (true, true) => {
                let w = u - l;
                rng.uniform(l + 0.1 * w, u - 0.1 * w)
            }
            (true, false) => l + rng.uniform(0.5, 1.5),
            (false, true) => u - rng.uniform(0.5, 1.5),
            (false, false) => rng.uniform(-1.0, 1.0),
        })
        .collect()
}

fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Gradient of the Lagrangian `f + y_g'g + y_h'h` w.r.t. `x` at fixed `y`,
/// assembled from the model's gradient and Jacobian evaluations.
fn lagrangian_grad(
    p: &dyn MdsProblem,
    xd: &[f64],
    xs: &[f64],
    y_g: &[f64],
    y_h: &[f64],
    bundle: &mut EvalBundle,
) -> (Vec<f64>, Vec<f64>) {
    p.objective_grad(xd, xs, &mut bundle.grad_d, &mut bundle.grad_s);
    p.jacobians(xd, xs, &mut bundle.jac);
    let mut gd = bundle.grad_d.clone();
    let mut gs = bundle.grad_s.clone();
    for (r, &y) in y_g.iter().enumerate() {
        for (c, g) in gd.iter_mut().enumerate() {
            *g += bundle.jac.jdg.get(r, c) * y;
        }
    }
    for (r, &y) in y_h.iter().enumerate() {
        for (c, g) in gd.iter_mut().enumerate() {
            *g += bundle.jac.jdh.get(r, c) * y;
        }
    }
    for (i, j, v) in bundle.jac.jsg.iter() {
        gs[j] += v * y_g[i];
    }
    for (i, j, v) in bundle.jac.jsh.iter() {
        gs[j] += v * y_h[i];
    }
    (gd, gs)
}

/// Checks `∇f`, the Jacobians of `g` and `h`, and Lagrangian Hessian-vector
/// products against central differences at `points` random interior points.
/// The step is `1e-6 * (1 + |x|_inf)`; failures are relative to
/// `1 + |analytic|_inf`.
pub fn check_derivatives(p: &dyn MdsProblem, seed: u64, points: usize, tol: f64) -> FdReport {
    let dims = p.dims();
    let bounds = p.bounds();
    let mut rng = SplitMix64::new(seed ^ 0xfd_0c4e);
    let mut report = FdReport::default();
    let mut bundle = EvalBundle::new(&dims);

    for pt_idx in 0..points {
        let xd = sample_interior(&mut rng, &bounds.xd_lo, &bounds.xd_up);
        let xs = sample_interior(&mut rng, &bounds.xs_lo, &bounds.xs_up);
        let vd: Vec<f64> = (0..dims.n_d).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let vs: Vec<f64> = (0..dims.n_s).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let y_g: Vec<f64> = (0..dims.m_e).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let y_h: Vec<f64> = (0..dims.m_i).map(|_| rng.uniform(-1.0, 1.0)).collect();

        let scale = inf_norm(&xd).max(inf_norm(&xs));
        let eps = 1e-6 * (1.0 + scale);
        let shift = |sign: f64| -> (Vec<f64>, Vec<f64>) {
            (
                xd.iter().zip(&vd).map(|(&x, &v)| x + sign * eps * v).collect(),
                xs.iter().zip(&vs).map(|(&x, &v)| x + sign * eps * v).collect(),
            )
        };
        let (xd_p, xs_p) = shift(1.0);
        let (xd_m, xs_m) = shift(-1.0);

        let record = |name: &str, fd: f64, analytic: f64, report: &mut FdReport| {
            let rel = (fd - analytic).abs() / (1.0 + analytic.abs());
            report.checks += 1;
            report.max_rel_err = report.max_rel_err.max(rel);
            if rel > tol {
                report.failures.push(format!(
                    "point {pt_idx}: {name} mismatch, fd {fd:.12e} vs analytic {analytic:.12e} (rel {rel:.3e})"
                ));
            }
        };

        // objective directional derivative
        {
            p.objective_grad(&xd, &xs, &mut bundle.grad_d, &mut bundle.grad_s);
            let analytic: f64 = bundle
                .grad_d
                .iter()
                .zip(&vd)
                .chain(bundle.grad_s.iter().zip(&vs))
                .map(|(&g, &v)| g * v)
                .sum();
            let fd =
                (p.objective(&xd_p, &xs_p) - p.objective(&xd_m, &xs_m)) / (2.0 * eps);
            record("objective gradient", fd, analytic, &mut report);
        }

        // constraint Jacobians, row by row against directional differences
        {
            p.jacobians(&xd, &xs, &mut bundle.jac);
            let jv = |jd: &DenseMatrix, js: &mdsipm::TripletMatrix, rows: usize| -> Vec<f64> {
                let mut out = vec![0.0; rows];
                for r in 0..rows {
                    let mut s = 0.0;
                    for (a, &v) in jd.row(r).iter().zip(&vd) {
                        s += a * v;
                    }
                    out[r] = s;
                }
                for (i, j, v) in js.iter() {
                    out[i] += v * vs[j];
                }
                out
            };
            let jg = jv(&bundle.jac.jdg, &bundle.jac.jsg, dims.m_e);
            let jh = jv(&bundle.jac.jdh, &bundle.jac.jsh, dims.m_i);

            let mut gp = vec![0.0; dims.m_e];
            let mut gm = vec![0.0; dims.m_e];
            p.eq_constraints(&xd_p, &xs_p, &mut gp);
            p.eq_constraints(&xd_m, &xs_m, &mut gm);
            for r in 0..dims.m_e {
                record(
                    &format!("equality Jacobian row {r}"),
                    (gp[r] - gm[r]) / (2.0 * eps),
                    jg[r],
                    &mut report,
                );
            }
            let mut hp = vec![0.0; dims.m_i];
            let mut hm = vec![0.0; dims.m_i];
            p.ineq_constraints(&xd_p, &xs_p, &mut hp);
            p.ineq_constraints(&xd_m, &xs_m, &mut hm);
            for r in 0..dims.m_i {
                record(
                    &format!("inequality Jacobian row {r}"),
                    (hp[r] - hm[r]) / (2.0 * eps),
                    jh[r],
                    &mut report,
                );
            }
        }

        // Lagrangian Hessian-vector product
        {
            p.lagrangian_hessian(&xd, &xs, &y_g, &y_h, &mut bundle.qdd, &mut bundle.qss);
            let mut hv_d = vec![0.0; dims.n_d];
            for i in 0..dims.n_d {
                let mut s = 0.0;
                for (a, &v) in bundle.qdd.row(i).iter().zip(&vd) {
                    s += a * v;
                }
                hv_d[i] = s;
            }
            let hv_s: Vec<f64> = bundle.qss.iter().zip(&vs).map(|(&q, &v)| q * v).collect();

            let (gd_p, gs_p) = lagrangian_grad(p, &xd_p, &xs_p, &y_g, &y_h, &mut bundle);
            let (gd_m, gs_m) = lagrangian_grad(p, &xd_m, &xs_m, &y_g, &y_h, &mut bundle);
            let mut fd_max = 0.0_f64;
            let mut an_max = 0.0_f64;
            let mut err = 0.0_f64;
            for i in 0..dims.n_d {
                let fd = (gd_p[i] - gd_m[i]) / (2.0 * eps);
                err = err.max((fd - hv_d[i]).abs());
                fd_max = fd_max.max(fd.abs());
                an_max = an_max.max(hv_d[i].abs());
            }
            for i in 0..dims.n_s {
                let fd = (gs_p[i] - gs_m[i]) / (2.0 * eps);
                err = err.max((fd - hv_s[i]).abs());
                fd_max = fd_max.max(fd.abs());
                an_max = an_max.max(hv_s[i].abs());
            }
            let rel = err / (1.0 + an_max);
            report.checks += 1;
            report.max_rel_err = report.max_rel_err.max(rel);
            if rel > tol {
                report.failures.push(format!(
                    "point {pt_idx}: Hessian-vector mismatch (rel {rel:.3e})"
                ));
            }
        }
    }
    report
}
