use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use log::debug;
use thiserror::Error;

use crate::clock::{Clock, NULL_CLOCK};
use crate::ipm::filter::Filter;
use crate::ipm::kkt::{
    build_diagonals, build_residuals, compress, recover_sparse_step, CompressedKkt, KktBuilder,
    KktError, KktSystem4,
};
use crate::ipm::observer::{IterationObserver, StepRecord};
use crate::ipm::point::{Direction, IteratePoint};
use crate::ipm::result::{BarrierState, IterationLog, SolveResult, SolveStatus};
use crate::ipm::timing::{KernelClass, KernelTimers};
use crate::ipm::SolverOptions;
use crate::is_finite_bound;
use crate::ldl::{bk_factorize, Inertia, LdlFactors};
use crate::linalg::{Kernels, LinAlgError, ReferenceKernels};
use crate::nlp::{eval_all, EvalBundle, EvalError, MdsProblem, ProblemBounds};

/// Relative backtracking floor: the line search gives up below
/// `1e-14 * alpha_max`.
const ALPHA_FLOOR_REL: f64 = 1e-14;

/// A primal direction with `|dx_i| < 10 eps (1 + |x_i|)` everywhere carries
/// no representable primal progress; the solve loop then updates only the
/// bound duals instead of running the line search.
const TINY_STEP_TOL: f64 = 10.0 * f64::EPSILON;

/// Consecutive dual-only iterations tolerated before declaring a stall.
const MAX_TINY_STEPS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InitError {
    #[error("no interior exists for {what} component {index} (lower bound >= upper bound)")]
    EmptyInterior { what: &'static str, index: usize },
    #[error("inequality evaluation produced a non-finite value at entry {index}")]
    NonFiniteConstraint { index: usize },
}

/// Hard failures of [`Solver::run`]; algorithmic outcomes are reported in
/// [`SolveStatus`] instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("initialization failed: {0}")]
    Init(#[from] InitError),
    #[error("kkt assembly failed: {0}")]
    Kkt(#[from] KktError),
    #[error("kernel failure: {0}")]
    Kernel(#[from] LinAlgError),
}

/// Pushes each component strictly inside its finite bounds by at least
/// `kappa1 * max(1, |bound|)`, capped by `kappa1 * width` on two-sided
/// ranges so the pushes cannot cross.
fn push_interior(
    what: &'static str,
    x: &mut [f64],
    lo: &[f64],
    up: &[f64],
    kappa1: f64,
) -> Result<(), InitError> {
    for i in 0..x.len() {
        let (l, u) = (lo[i], up[i]);
        match (is_finite_bound(l), is_finite_bound(u)) {
            (true, true) => {
                if l >= u {
                    return Err(InitError::EmptyInterior { what, index: i });
                }
                let width = u - l;
                let pl = (kappa1 * l.abs().max(1.0)).min(kappa1 * width);
                let pu = (kappa1 * u.abs().max(1.0)).min(kappa1 * width);
                x[i] = x[i].max(l + pl).min(u - pu);
            }
            (true, false) => x[i] = x[i].max(l + kappa1 * l.abs().max(1.0)),
            (false, true) => x[i] = x[i].min(u - kappa1 * u.abs().max(1.0)),
            (false, false) => {}
        }
    }
    Ok(())
}

/// Builds the starting iterate: primal variables pushed strictly inside
/// their bounds, slacks set to the (pushed) inequality values, bound duals
/// primed to `mu0 / distance`, equality and inequality multipliers zero.
pub fn initialize(
    p: &dyn MdsProblem,
    opts: &SolverOptions,
    start: Option<(&[f64], &[f64])>,
) -> Result<IteratePoint, InitError> {
    let dims = p.dims();
    let bounds = p.bounds();
    let mut pt = IteratePoint::zeros(&dims);
    if let Some((xd0, xs0)) = start {
        pt.xd.copy_from_slice(xd0);
        pt.xs.copy_from_slice(xs0);
    }
    push_interior(
        "dense variable",
        &mut pt.xd,
        &bounds.xd_lo,
        &bounds.xd_up,
        opts.kappa_1,
    )?;
    push_interior(
        "sparse variable",
        &mut pt.xs,
        &bounds.xs_lo,
        &bounds.xs_up,
        opts.kappa_1,
    )?;

    p.ineq_constraints(&pt.xd, &pt.xs, &mut pt.s);
    if let Some(index) = pt.s.iter().position(|v| !v.is_finite()) {
        return Err(InitError::NonFiniteConstraint { index });
    }
    push_interior("slack", &mut pt.s, &bounds.h_lo, &bounds.h_up, opts.kappa_1)?;

    let prime = |x: &[f64], lo: &[f64], up: &[f64], z_lo: &mut [f64], z_up: &mut [f64]| {
        for i in 0..x.len() {
            if is_finite_bound(lo[i]) {
                z_lo[i] = opts.mu0 / (x[i] - lo[i]);
            }
            if is_finite_bound(up[i]) {
                z_up[i] = opts.mu0 / (up[i] - x[i]);
            }
        }
    };
    {
        let IteratePoint {
            xd,
            xs,
            s,
            z_lo_d,
            z_up_d,
            z_lo_s,
            z_up_s,
            v_lo,
            v_up,
            ..
        } = &mut pt;
        prime(xd, &bounds.xd_lo, &bounds.xd_up, z_lo_d, z_up_d);
        prime(xs, &bounds.xs_lo, &bounds.xs_up, z_lo_s, z_up_s);
        prime(s, &bounds.h_lo, &bounds.h_up, v_lo, v_up);
    }
    Ok(pt)
}

/// Sum of `ln(distance)` over every finite bound of the primal variables
/// and slacks; error if any such distance is not strictly positive.
fn barrier_log_sum(pt: &IteratePoint, bounds: &ProblemBounds) -> Result<f64, KktError> {
    let mut sum = 0.0;
    let mut scan = |what: &'static str, x: &[f64], lo: &[f64], up: &[f64]| -> Result<(), KktError> {
        for i in 0..x.len() {
            if is_finite_bound(lo[i]) {
                let d = x[i] - lo[i];
                if d <= 0.0 {
                    return Err(KktError::NotInterior { what, index: i });
                }
                sum += libm::log(d);
            }
            if is_finite_bound(up[i]) {
                let d = up[i] - x[i];
                if d <= 0.0 {
                    return Err(KktError::NotInterior { what, index: i });
                }
                sum += libm::log(d);
            }
        }
        Ok(())
    };
    scan("dense variable", &pt.xd, &bounds.xd_lo, &bounds.xd_up)?;
    scan("sparse variable", &pt.xs, &bounds.xs_lo, &bounds.xs_up)?;
    scan("slack", &pt.s, &bounds.h_lo, &bounds.h_up)?;
    Ok(sum)
}

/// Barrier objective `phi = f(x) - mu * sum(ln(distances to finite bounds))`
/// over primal variables and slacks. At `mu = 0` this is exactly `f`.
pub fn barrier_phi(p: &dyn MdsProblem, pt: &IteratePoint, mu: f64) -> Result<f64, KktError> {
    let f = p.objective(&pt.xd, &pt.xs);
    if mu == 0.0 {
        return Ok(f);
    }
    Ok(f - mu * barrier_log_sum(pt, p.bounds())?)
}

fn phi_from_objective(
    f: f64,
    pt: &IteratePoint,
    bounds: &ProblemBounds,
    mu: f64,
) -> Result<f64, KktError> {
    if mu == 0.0 {
        return Ok(f);
    }
    Ok(f - mu * barrier_log_sum(pt, bounds)?)
}

/// Constraint violation `theta`: 1-norm of the stacked equality and
/// inequality-slack residuals.
fn theta_from(g_val: &[f64], g_rhs: &[f64], h_val: &[f64], s: &[f64]) -> f64 {
    let mut t = 0.0;
    for (g, ge) in g_val.iter().zip(g_rhs) {
        t += (g - ge).abs();
    }
    for (h, si) in h_val.iter().zip(s) {
        t += (h - si).abs();
    }
    t
}

/// Scaled optimality-error components of the barrier KKT conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalityError {
    /// `e_mu`: max of the scaled component norms.
    pub total: f64,
    /// Unscaled infinity norm of the stationarity residuals.
    pub dual_inf: f64,
    /// Infinity norm of the primal residuals.
    pub primal_inf: f64,
    /// Unscaled infinity norm of the complementarity residuals.
    pub complementarity: f64,
}

pub(crate) fn kkt_error_with(
    bundle: &EvalBundle,
    bounds: &ProblemBounds,
    g_rhs: &[f64],
    pt: &IteratePoint,
    mu: f64,
    s_max: f64,
    kernels: &dyn Kernels,
) -> Result<OptimalityError, LinAlgError> {
    // Stationarity w.r.t. x_d, x_s, s.
    let mut t_d = bundle.grad_d.clone();
    kernels.gemv(1.0, &mut t_d, 1.0, &bundle.jac.jdg, &pt.y_g, true)?;
    kernels.gemv(1.0, &mut t_d, 1.0, &bundle.jac.jdh, &pt.y_h, true)?;
    for i in 0..t_d.len() {
        t_d[i] += pt.z_up_d[i] - pt.z_lo_d[i];
    }
    let mut t_s = bundle.grad_s.clone();
    kernels.triplet_times_vec(1.0, &mut t_s, 1.0, &bundle.jac.jsg, &pt.y_g, true)?;
    kernels.triplet_times_vec(1.0, &mut t_s, 1.0, &bundle.jac.jsh, &pt.y_h, true)?;
    for i in 0..t_s.len() {
        t_s[i] += pt.z_up_s[i] - pt.z_lo_s[i];
    }
    let mut dual_inf = 0.0_f64;
    for v in t_d.iter().chain(&t_s) {
        dual_inf = dual_inf.max(v.abs());
    }
    for i in 0..pt.s.len() {
        dual_inf = dual_inf.max((-pt.y_h[i] - pt.v_lo[i] + pt.v_up[i]).abs());
    }

    let mut primal_inf = 0.0_f64;
    for (g, ge) in bundle.g_val.iter().zip(g_rhs) {
        primal_inf = primal_inf.max((g - ge).abs());
    }
    for (h, si) in bundle.h_val.iter().zip(&pt.s) {
        primal_inf = primal_inf.max((h - si).abs());
    }

    // Complementarity `dist * dual - mu` for every finite bound, plus the
    // multiplier-magnitude scalings.
    let mut comp = 0.0_f64;
    let mut dual_sum = 0.0_f64;
    let mut dual_count = 0usize;
    let mut scan = |x: &[f64], lo: &[f64], up: &[f64], z_lo: &[f64], z_up: &[f64]| {
        for i in 0..x.len() {
            if is_finite_bound(lo[i]) {
                comp = comp.max(((x[i] - lo[i]) * z_lo[i] - mu).abs());
                dual_sum += z_lo[i].abs();
                dual_count += 1;
            }
            if is_finite_bound(up[i]) {
                comp = comp.max(((up[i] - x[i]) * z_up[i] - mu).abs());
                dual_sum += z_up[i].abs();
                dual_count += 1;
            }
        }
    };
    scan(&pt.xd, &bounds.xd_lo, &bounds.xd_up, &pt.z_lo_d, &pt.z_up_d);
    scan(&pt.xs, &bounds.xs_lo, &bounds.xs_up, &pt.z_lo_s, &pt.z_up_s);
    scan(&pt.s, &bounds.h_lo, &bounds.h_up, &pt.v_lo, &pt.v_up);

    let mut y_sum = 0.0_f64;
    for v in pt.y_g.iter().chain(&pt.y_h) {
        y_sum += v.abs();
    }
    let m = pt.y_g.len() + pt.y_h.len();
    let s_d = ((y_sum + dual_sum) / (m + dual_count).max(1) as f64).max(s_max) / s_max;
    let s_c = (dual_sum / dual_count.max(1) as f64).max(s_max) / s_max;

    Ok(OptimalityError {
        total: (dual_inf / s_d).max(primal_inf).max(comp / s_c),
        dual_inf,
        primal_inf,
        complementarity: comp,
    })
}

/// Optimality error `e_mu` at a point, evaluating the model along the way.
pub fn kkt_error(
    p: &dyn MdsProblem,
    pt: &IteratePoint,
    mu: f64,
    opts: &SolverOptions,
) -> Result<OptimalityError, EvalError> {
    let mut bundle = EvalBundle::new(&p.dims());
    eval_all(p, &pt.xd, &pt.xs, &pt.y_g, &pt.y_h, &mut bundle)?;
    Ok(kkt_error_with(
        &bundle,
        p.bounds(),
        p.eq_rhs(),
        pt,
        mu,
        opts.s_max,
        &ReferenceKernels,
    )
    .expect("shape mismatch in kkt_error"))
}

/// Barrier homotopy rule: when `e_mu <= kappa_epsilon * mu` the parameter
/// drops to `max(tol/10, min(kappa_mu * mu, mu^theta_mu))`; otherwise (or at
/// the floor) it stays.
pub fn update_barrier(mu: f64, e_mu: f64, opts: &SolverOptions) -> f64 {
    let floor = opts.mu_floor();
    if mu > floor && e_mu <= opts.kappa_epsilon * mu {
        (opts.kappa_mu * mu)
            .min(libm::pow(mu, opts.theta_mu))
            .max(floor)
    } else {
        mu
    }
}

/// Primal-dual bound-dual directions, eliminated from the complementarity
/// rows: `dz_lo = mu/d - z_lo - (z_lo/d) dx`, `dz_up = mu/d - z_up + (z_up/d) dx`
/// with `d` the respective distance; zero at infinite bounds.
fn bound_dual_directions(bounds: &ProblemBounds, pt: &IteratePoint, dir: &mut Direction, mu: f64) {
    let fill = |x: &[f64],
                dx: &[f64],
                lo: &[f64],
                up: &[f64],
                z_lo: &[f64],
                z_up: &[f64],
                dz_lo: &mut [f64],
                dz_up: &mut [f64]| {
        for i in 0..x.len() {
            dz_lo[i] = if is_finite_bound(lo[i]) {
                let d = x[i] - lo[i];
                mu / d - z_lo[i] - z_lo[i] / d * dx[i]
            } else {
                0.0
            };
            dz_up[i] = if is_finite_bound(up[i]) {
                let d = up[i] - x[i];
                mu / d - z_up[i] + z_up[i] / d * dx[i]
            } else {
                0.0
            };
        }
    };
    fill(
        &pt.xd,
        &dir.dxd,
        &bounds.xd_lo,
        &bounds.xd_up,
        &pt.z_lo_d,
        &pt.z_up_d,
        &mut dir.dz_lo_d,
        &mut dir.dz_up_d,
    );
    fill(
        &pt.xs,
        &dir.dxs,
        &bounds.xs_lo,
        &bounds.xs_up,
        &pt.z_lo_s,
        &pt.z_up_s,
        &mut dir.dz_lo_s,
        &mut dir.dz_up_s,
    );
    fill(
        &pt.s,
        &dir.ds,
        &bounds.h_lo,
        &bounds.h_up,
        &pt.v_lo,
        &pt.v_up,
        &mut dir.dv_lo,
        &mut dir.dv_up,
    );
}

/// Why the inertia-corrected factorization gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IcFailure {
    #[error("regularization exceeded delta_w_max without reaching the required inertia")]
    RegularizationExhausted,
    #[error("factorization failed on non-finite data")]
    Numeric,
}

/// Accepted inertia-corrected step: the direction, the system that produced
/// it, and the regularization that made its inertia `(n_d, 0, m)`.
pub struct CorrectedStep<'a> {
    pub direction: Direction,
    pub k4: KktSystem4<'a>,
    pub compressed: CompressedKkt,
    pub inertia: Inertia,
    pub delta_w: f64,
    pub delta_c: f64,
}

enum Attempt<'a> {
    Accepted {
        k4: KktSystem4<'a>,
        compressed: CompressedKkt,
        factors: LdlFactors,
        inertia: Inertia,
    },
    Rejected {
        zero_detected: bool,
    },
}

fn factor_attempt<'a>(
    builder: &KktBuilder<'a>,
    delta_w: f64,
    delta_c: f64,
    target: Inertia,
    kernels: &dyn Kernels,
    timers: &mut KernelTimers<'_>,
) -> Result<Attempt<'a>, IcFailure> {
    let k4 = match builder.build(delta_w, delta_c) {
        Ok(k4) => k4,
        Err(KktError::NonPositiveQss { .. }) => {
            return Ok(Attempt::Rejected {
                zero_detected: true,
            })
        }
        Err(_) => return Err(IcFailure::Numeric),
    };
    let compressed = match timers.time(KernelClass::K3, || compress(&k4, kernels)) {
        Ok(c) => c,
        Err(KktError::NonPositiveQss { .. }) => {
            return Ok(Attempt::Rejected {
                zero_detected: true,
            })
        }
        Err(_) => return Err(IcFailure::Numeric),
    };
    let factors = match timers.time(KernelClass::K4, || bk_factorize(&compressed.m)) {
        Ok(f) => f,
        Err(_) => return Err(IcFailure::Numeric),
    };
    let inertia = factors.inertia();
    if inertia == target {
        Ok(Attempt::Accepted {
            k4,
            compressed,
            factors,
            inertia,
        })
    } else {
        Ok(Attempt::Rejected {
            zero_detected: inertia.zero > 0,
        })
    }
}

/// Factorizes the compressed system, repeating with increasing primal
/// regularization until the inertia equals `(n_d, 0, m)`; since the inertia
/// of the eliminated `Q_s` block is `(n_s, 0, 0)` whenever its diagonal is
/// positive, inertia additivity then certifies `(n, 0, m)` for the full
/// system.
///
/// The schedule: a first trial at `delta_w = 0` with `delta_c` engaged only
/// if zero eigenvalues were detected there; then a warm-started or
/// first-episode `delta_w`, escalating by `kappa_w_plus` until acceptance or
/// `delta_w_max`.
pub fn solve_with_inertia_correction<'a>(
    builder: &KktBuilder<'a>,
    bounds: &ProblemBounds,
    pt: &IteratePoint,
    mu: f64,
    opts: &SolverOptions,
    delta_w_last: f64,
    kernels: &dyn Kernels,
    timers: &mut KernelTimers<'_>,
) -> Result<CorrectedStep<'a>, IcFailure> {
    let dims_nd = builder.bundle.qdd.rows();
    let m = builder.residuals.r_yg.len() + builder.residuals.r_yh.len();
    let target = Inertia {
        pos: dims_nd,
        zero: 0,
        neg: m,
    };

    let accept = |k4: KktSystem4<'a>,
                      compressed: CompressedKkt,
                      factors: LdlFactors,
                      inertia: Inertia,
                      timers: &mut KernelTimers<'_>|
     -> Result<Option<CorrectedStep<'a>>, IcFailure> {
        let u = match timers.time(KernelClass::K4, || factors.solve(&compressed.rhs)) {
            Ok(u) => u,
            // Accepted inertia with a singular pivot cannot happen under the
            // shared zero tolerance; treat defensively as a rejection.
            Err(_) => return Ok(None),
        };
        let (nd, me) = (compressed.n_d, compressed.m_e);
        let mut dir = Direction::zeros(&k4.dims());
        dir.dxd.copy_from_slice(&u[..nd]);
        dir.dy_g.copy_from_slice(&u[nd..nd + me]);
        dir.dy_h.copy_from_slice(&u[nd + me..]);
        dir.dxs = timers
            .time(KernelClass::K2, || {
                recover_sparse_step(&k4, &dir.dy_g, &dir.dy_h, kernels)
            })
            .map_err(|_| IcFailure::Numeric)?;
        timers.time(KernelClass::K1, || {
            for i in 0..dir.ds.len() {
                dir.ds[i] = (builder.residuals.r_s[i] + dir.dy_h[i]) / k4.dh[i];
            }
            bound_dual_directions(bounds, pt, &mut dir, mu);
        });
        let (delta_w, delta_c) = (k4.delta_w, k4.delta_c);
        Ok(Some(CorrectedStep {
            direction: dir,
            k4,
            compressed,
            inertia,
            delta_w,
            delta_c,
        }))
    };

    let zero_detected = match factor_attempt(builder, 0.0, 0.0, target, kernels, timers)? {
        Attempt::Accepted {
            k4,
            compressed,
            factors,
            inertia,
        } => {
            if let Some(step) = accept(k4, compressed, factors, inertia, timers)? {
                return Ok(step);
            }
            true
        }
        Attempt::Rejected { zero_detected } => zero_detected,
    };

    let delta_c = if zero_detected {
        opts.delta_c_bar * libm::pow(mu, opts.kappa_c)
    } else {
        0.0
    };
    let mut delta_w = if delta_w_last == 0.0 {
        (opts.kappa_w_plus_first * opts.delta_w0).max(opts.delta_w_min)
    } else {
        (opts.kappa_w_minus * delta_w_last).max(opts.delta_w_min)
    };
    loop {
        if let Attempt::Accepted {
            k4,
            compressed,
            factors,
            inertia,
        } = factor_attempt(builder, delta_w, delta_c, target, kernels, timers)?
        {
            if let Some(step) = accept(k4, compressed, factors, inertia, timers)? {
                return Ok(step);
            }
        }
        delta_w *= opts.kappa_w_plus;
        if delta_w > opts.delta_w_max {
            return Err(IcFailure::RegularizationExhausted);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LineSearchFailure {
    #[error("line search backtracked below its floor; feasibility restoration would be required")]
    RestorationNeeded,
}

/// Outcome of an accepted line search, with enough data to replay the
/// acceptance decision.
#[derive(Clone, Debug)]
pub struct LineSearchOutcome {
    pub alpha_primal: f64,
    pub alpha_dual: f64,
    pub alpha_max: f64,
    pub theta_old: f64,
    pub phi_old: f64,
    pub theta_new: f64,
    pub phi_new: f64,
    pub dphi: f64,
    pub armijo: bool,
    pub filter_augmented: bool,
    pub filter_before: Vec<(f64, f64)>,
}

fn primal_direction_is_tiny(pt: &IteratePoint, dir: &Direction) -> bool {
    let blocks: [(&[f64], &[f64]); 3] = [
        (&pt.xd, &dir.dxd),
        (&pt.xs, &dir.dxs),
        (&pt.s, &dir.ds),
    ];
    blocks.iter().all(|(x, dx)| {
        x.iter()
            .zip(dx.iter())
            .all(|(&xi, &di)| di.abs() < TINY_STEP_TOL * (1.0 + xi.abs()))
    })
}

/// Fraction-to-boundary step for the bound duals: largest `alpha` in
/// `(0, 1]` with `z + alpha dz >= (1 - tau) z` componentwise.
fn dual_step_length(pt: &IteratePoint, dir: &Direction, tau: f64) -> f64 {
    let mut alpha: f64 = 1.0;
    let pairs: [(&[f64], &[f64]); 6] = [
        (&pt.z_lo_d, &dir.dz_lo_d),
        (&pt.z_up_d, &dir.dz_up_d),
        (&pt.z_lo_s, &dir.dz_lo_s),
        (&pt.z_up_s, &dir.dz_up_s),
        (&pt.v_lo, &dir.dv_lo),
        (&pt.v_up, &dir.dv_up),
    ];
    for (z, dz) in pairs {
        for i in 0..z.len() {
            if dz[i] < 0.0 {
                alpha = alpha.min(tau * z[i] / -dz[i]);
            }
        }
    }
    alpha
}

/// Directional derivative of the barrier objective along the primal step.
fn barrier_directional_derivative(
    bundle: &EvalBundle,
    bounds: &ProblemBounds,
    pt: &IteratePoint,
    dir: &Direction,
    mu: f64,
    kernels: &dyn Kernels,
) -> Result<f64, LinAlgError> {
    let mut dphi = kernels.dot(&bundle.grad_d, &dir.dxd)?;
    dphi += kernels.dot(&bundle.grad_s, &dir.dxs)?;
    let mut barrier = |x: &[f64], dx: &[f64], lo: &[f64], up: &[f64]| {
        for i in 0..x.len() {
            if is_finite_bound(lo[i]) {
                dphi -= mu / (x[i] - lo[i]) * dx[i];
            }
            if is_finite_bound(up[i]) {
                dphi += mu / (up[i] - x[i]) * dx[i];
            }
        }
    };
    barrier(&pt.xd, &dir.dxd, &bounds.xd_lo, &bounds.xd_up);
    barrier(&pt.xs, &dir.dxs, &bounds.xs_lo, &bounds.xs_up);
    barrier(&pt.s, &dir.ds, &bounds.h_lo, &bounds.h_up);
    Ok(dphi)
}

/// Backtracking filter line search. Starts at the fraction-to-boundary step
/// and halves; a trial is accepted when it is acceptable to the filter and
/// passes either the Armijo test (when the switching condition holds) or
/// sufficient decrease in `theta` or `phi` versus the incumbent. On
/// acceptance the iterate (including multipliers and safeguarded bound
/// duals) is updated in place and the filter augmented when the acceptance
/// did not come through the Armijo branch.
pub fn line_search(
    p: &dyn MdsProblem,
    pt: &mut IteratePoint,
    bundle: &EvalBundle,
    dir: &Direction,
    mu: f64,
    filter: &mut Filter,
    opts: &SolverOptions,
    kernels: &dyn Kernels,
    timers: &mut KernelTimers<'_>,
) -> Result<LineSearchOutcome, LineSearchFailure> {
    let bounds = p.bounds();
    let tau = opts.tau_min.max(1.0 - mu);

    let (alpha_max, alpha_dual, dphi) = timers.time(KernelClass::K1, || {
        let a_xd = kernels
            .max_step_to_bound(&pt.xd, &dir.dxd, &bounds.xd_lo, &bounds.xd_up, tau)
            .expect("iterate interiority");
        let a_xs = kernels
            .max_step_to_bound(&pt.xs, &dir.dxs, &bounds.xs_lo, &bounds.xs_up, tau)
            .expect("iterate interiority");
        let a_s = kernels
            .max_step_to_bound(&pt.s, &dir.ds, &bounds.h_lo, &bounds.h_up, tau)
            .expect("iterate interiority");
        let alpha_max = a_xd.min(a_xs).min(a_s);
        let alpha_dual = dual_step_length(pt, dir, tau);
        let dphi = barrier_directional_derivative(bundle, bounds, pt, dir, mu, kernels)
            .expect("direction shapes");
        (alpha_max, alpha_dual, dphi)
    });

    let theta_old = theta_from(&bundle.g_val, p.eq_rhs(), &bundle.h_val, &pt.s);
    let phi_old =
        phi_from_objective(bundle.f, pt, bounds, mu).expect("incumbent iterate interiority");
    let filter_before = filter.entries().to_vec();

    let mut trial = IteratePoint::zeros(&p.dims());
    let mut g_t = vec![0.0; bundle.g_val.len()];
    let mut h_t = vec![0.0; bundle.h_val.len()];
    let floor = ALPHA_FLOOR_REL * alpha_max;

    let mut alpha = alpha_max;
    loop {
        timers.time(KernelClass::K1, || {
            trial.xd.copy_from_slice(&pt.xd);
            trial.xs.copy_from_slice(&pt.xs);
            trial.s.copy_from_slice(&pt.s);
            kernels.axpy(alpha, &dir.dxd, &mut trial.xd).unwrap();
            kernels.axpy(alpha, &dir.dxs, &mut trial.xs).unwrap();
            kernels.axpy(alpha, &dir.ds, &mut trial.s).unwrap();
        });
        let f_t = p.objective(&trial.xd, &trial.xs);
        p.eq_constraints(&trial.xd, &trial.xs, &mut g_t);
        p.ineq_constraints(&trial.xd, &trial.xs, &mut h_t);

        let finite = f_t.is_finite()
            && g_t.iter().all(|v| v.is_finite())
            && h_t.iter().all(|v| v.is_finite());
        if finite {
            let theta_t = theta_from(&g_t, p.eq_rhs(), &h_t, &trial.s);
            let phi_t = match phi_from_objective(f_t, &trial, bounds, mu) {
                Ok(v) if v.is_finite() => v,
                _ => f64::INFINITY,
            };
            let acceptable =
                filter.accepts(theta_t, phi_t, opts.gamma_theta, opts.gamma_phi);
            let switching =
                dphi < 0.0 && alpha * libm::pow(-dphi, opts.s_phi) > libm::pow(theta_old, opts.s_theta);
            let accepted = acceptable
                && if switching {
                    phi_t <= phi_old + opts.eta_phi * alpha * dphi
                } else {
                    theta_t < (1.0 - opts.gamma_theta) * theta_old
                        || phi_t < phi_old - opts.gamma_phi * theta_old
                };

            if accepted {
                timers.time(KernelClass::K1, || {
                    core::mem::swap(&mut pt.xd, &mut trial.xd);
                    core::mem::swap(&mut pt.xs, &mut trial.xs);
                    core::mem::swap(&mut pt.s, &mut trial.s);
                    kernels.axpy(alpha, &dir.dy_g, &mut pt.y_g).unwrap();
                    kernels.axpy(alpha, &dir.dy_h, &mut pt.y_h).unwrap();
                    step_and_safeguard_duals(bounds, pt, dir, alpha_dual, mu, opts.kappa_sigma);
                });
                let filter_augmented = !switching;
                if filter_augmented {
                    filter.add(theta_old, phi_old);
                }
                return Ok(LineSearchOutcome {
                    alpha_primal: alpha,
                    alpha_dual,
                    alpha_max,
                    theta_old,
                    phi_old,
                    theta_new: theta_t,
                    phi_new: phi_t,
                    dphi,
                    armijo: switching,
                    filter_augmented,
                    filter_before,
                });
            }
        }

        alpha *= 0.5;
        if alpha < floor {
            return Err(LineSearchFailure::RestorationNeeded);
        }
    }
}

/// Steps the bound duals by `alpha_dual` and clips them into the safeguard
/// corridor `[mu / (kappa_sigma * dist), kappa_sigma * mu / dist]` built
/// from the updated primal distances.
fn step_and_safeguard_duals(
    bounds: &ProblemBounds,
    pt: &mut IteratePoint,
    dir: &Direction,
    alpha_dual: f64,
    mu: f64,
    kappa_sigma: f64,
) {
    let clip = |x: &[f64],
                lo: &[f64],
                up: &[f64],
                z_lo: &mut [f64],
                z_up: &mut [f64],
                dz_lo: &[f64],
                dz_up: &[f64]| {
        for i in 0..x.len() {
            if is_finite_bound(lo[i]) {
                let d = x[i] - lo[i];
                let z = z_lo[i] + alpha_dual * dz_lo[i];
                z_lo[i] = z.max(mu / (kappa_sigma * d)).min(kappa_sigma * mu / d);
            }
            if is_finite_bound(up[i]) {
                let d = up[i] - x[i];
                let z = z_up[i] + alpha_dual * dz_up[i];
                z_up[i] = z.max(mu / (kappa_sigma * d)).min(kappa_sigma * mu / d);
            }
        }
    };
    {
        let IteratePoint {
            xd,
            xs,
            s,
            z_lo_d,
            z_up_d,
            z_lo_s,
            z_up_s,
            v_lo,
            v_up,
            ..
        } = pt;
        clip(
            xd,
            &bounds.xd_lo,
            &bounds.xd_up,
            z_lo_d,
            z_up_d,
            &dir.dz_lo_d,
            &dir.dz_up_d,
        );
        clip(
            xs,
            &bounds.xs_lo,
            &bounds.xs_up,
            z_lo_s,
            z_up_s,
            &dir.dz_lo_s,
            &dir.dz_up_s,
        );
        clip(
            s,
            &bounds.h_lo,
            &bounds.h_up,
            v_lo,
            v_up,
            &dir.dv_lo,
            &dir.dv_up,
        );
    }
}

/// Filter line-search interior-point solver bound to one problem.
pub struct Solver<'a> {
    problem: &'a dyn MdsProblem,
    opts: SolverOptions,
    kernels: Box<dyn Kernels>,
    clock: &'a dyn Clock,
    observer: Option<&'a mut dyn IterationObserver>,
    start: Option<(Vec<f64>, Vec<f64>)>,
}

impl<'a> Solver<'a> {
    pub fn new(problem: &'a dyn MdsProblem, opts: SolverOptions) -> Self {
        Self {
            problem,
            opts,
            kernels: Box::new(ReferenceKernels),
            clock: &NULL_CLOCK,
            observer: None,
            start: None,
        }
    }

    /// Swaps in a kernel suite from [`crate::linalg::make_linear_algebra`].
    pub fn with_kernels(mut self, kernels: Box<dyn Kernels>) -> Self {
        self.kernels = kernels;
        self
    }

    /// Enables wall-clock kernel timing.
    pub fn with_clock(mut self, clock: &'a dyn Clock) -> Self {
        self.clock = clock;
        self
    }

    pub fn with_observer(mut self, observer: &'a mut dyn IterationObserver) -> Self {
        self.observer = Some(observer);
        self
    }

    /// Primal start point (pushed interior before use).
    pub fn with_start(mut self, xd: Vec<f64>, xs: Vec<f64>) -> Self {
        self.start = Some((xd, xs));
        self
    }

    pub fn run(self) -> Result<SolveResult, SolveError> {
        let Solver {
            problem: p,
            opts,
            kernels,
            clock,
            mut observer,
            start,
        } = self;
        let kernels = &*kernels;
        let dims = p.dims();
        let bounds = p.bounds();
        let g_rhs = p.eq_rhs();

        let mut pt = initialize(
            p,
            &opts,
            start.as_ref().map(|(xd, xs)| (&xd[..], &xs[..])),
        )?;
        let mut state = BarrierState::new(opts.mu0);
        let mut bundle = EvalBundle::new(&dims);
        let mut log: Vec<IterationLog> = Vec::new();
        let status;
        let mut final_error = f64::INFINITY;
        let mut consecutive_tiny = 0usize;

        loop {
            if eval_all(p, &pt.xd, &pt.xs, &pt.y_g, &pt.y_h, &mut bundle).is_err() {
                status = SolveStatus::EvalFailure;
                break;
            }
            let t_iter0 = clock.now();
            let mut tm = KernelTimers::new(clock);

            let e0 = tm.time(KernelClass::K2, || {
                kkt_error_with(&bundle, bounds, g_rhs, &pt, 0.0, opts.s_max, kernels)
            })?;
            final_error = e0.total;
            if e0.total <= opts.tol {
                status = SolveStatus::Optimal;
                break;
            }
            if state.iteration >= opts.max_iter {
                status = SolveStatus::MaxIter;
                break;
            }

            // Drive the barrier parameter down while the subproblem is solved
            // to its tolerance; each reduction resets the filter.
            loop {
                let e_mu = tm.time(KernelClass::K2, || {
                    kkt_error_with(&bundle, bounds, g_rhs, &pt, state.mu, opts.s_max, kernels)
                })?;
                let new_mu = update_barrier(state.mu, e_mu.total, &opts);
                if new_mu == state.mu {
                    break;
                }
                debug!(
                    "iter {}: barrier update mu {} -> {}",
                    state.iteration, state.mu, new_mu
                );
                state.mu = new_mu;
                state.filter.clear();
            }

            let diagonals = tm.time(KernelClass::K1, || build_diagonals(bounds, &pt))?;
            let residuals = tm.time(KernelClass::K2, || {
                build_residuals(&bundle, bounds, g_rhs, &pt, state.mu, &diagonals.dh, kernels)
            })?;
            let builder = KktBuilder::new(&bundle, &diagonals, &residuals);

            let step = match solve_with_inertia_correction(
                &builder,
                bounds,
                &pt,
                state.mu,
                &opts,
                state.delta_w_last,
                kernels,
                &mut tm,
            ) {
                Ok(s) => s,
                Err(e) => {
                    debug!("iter {}: inertia correction failed: {e}", state.iteration);
                    status = SolveStatus::SingularSystem;
                    break;
                }
            };
            if step.delta_w > 0.0 {
                state.delta_w_last = step.delta_w;
            }
            if let Some(obs) = observer.as_deref_mut() {
                obs.on_kkt(state.iteration, &step.k4, &step.compressed);
            }

            // Degenerate case: the primal direction is below representable
            // resolution (the iterate already solves the primal side of the
            // barrier subproblem) and only the bound duals have to move.
            // The filter tests cannot accept a no-op trial, so take a
            // dual-only update instead of searching.
            if primal_direction_is_tiny(&pt, &step.direction) {
                consecutive_tiny += 1;
                if consecutive_tiny > MAX_TINY_STEPS {
                    status = SolveStatus::RestorationNeeded;
                    break;
                }
                let tau = opts.tau_min.max(1.0 - state.mu);
                let alpha_dual = dual_step_length(&pt, &step.direction, tau);
                tm.time(KernelClass::K1, || {
                    step_and_safeguard_duals(
                        bounds,
                        &mut pt,
                        &step.direction,
                        alpha_dual,
                        state.mu,
                        opts.kappa_sigma,
                    );
                });
                if let Some(obs) = observer.as_deref_mut() {
                    obs.on_iterate(state.iteration, &pt);
                }
                debug!(
                    "iter {}: dual-only update (tiny primal direction), alpha_dual={:.3e}",
                    state.iteration, alpha_dual
                );
                log.push(IterationLog {
                    iter: state.iteration,
                    mu: state.mu,
                    theta: theta_from(&bundle.g_val, g_rhs, &bundle.h_val, &pt.s),
                    phi: phi_from_objective(bundle.f, &pt, bounds, state.mu)?,
                    alpha_primal: 0.0,
                    alpha_dual,
                    delta_w: step.delta_w,
                    delta_c: step.delta_c,
                    inertia: step.inertia,
                    t_k1: tm.seconds(KernelClass::K1),
                    t_k2: tm.seconds(KernelClass::K2),
                    t_k3: tm.seconds(KernelClass::K3),
                    t_k4: tm.seconds(KernelClass::K4),
                    t_total: clock.now() - t_iter0,
                });
                state.iteration += 1;
                continue;
            }
            consecutive_tiny = 0;

            let ls = match line_search(
                p,
                &mut pt,
                &bundle,
                &step.direction,
                state.mu,
                &mut state.filter,
                &opts,
                kernels,
                &mut tm,
            ) {
                Ok(ls) => ls,
                Err(LineSearchFailure::RestorationNeeded) => {
                    status = SolveStatus::RestorationNeeded;
                    break;
                }
            };

            if let Some(obs) = observer.as_deref_mut() {
                obs.on_step(&StepRecord {
                    iter: state.iteration,
                    mu: state.mu,
                    theta_old: ls.theta_old,
                    phi_old: ls.phi_old,
                    theta_new: ls.theta_new,
                    phi_new: ls.phi_new,
                    dphi: ls.dphi,
                    alpha_primal: ls.alpha_primal,
                    alpha_max: ls.alpha_max,
                    alpha_dual: ls.alpha_dual,
                    armijo: ls.armijo,
                    filter_augmented: ls.filter_augmented,
                    filter_before: ls.filter_before.clone(),
                });
                obs.on_iterate(state.iteration, &pt);
            }

            debug!(
                "iter {}: mu={:.3e} theta={:.3e} phi={:.6e} alpha={:.3e} dw={:.1e} inertia=({},{},{})",
                state.iteration,
                state.mu,
                ls.theta_new,
                ls.phi_new,
                ls.alpha_primal,
                step.delta_w,
                step.inertia.pos,
                step.inertia.zero,
                step.inertia.neg
            );
            log.push(IterationLog {
                iter: state.iteration,
                mu: state.mu,
                theta: ls.theta_new,
                phi: ls.phi_new,
                alpha_primal: ls.alpha_primal,
                alpha_dual: ls.alpha_dual,
                delta_w: step.delta_w,
                delta_c: step.delta_c,
                inertia: step.inertia,
                t_k1: tm.seconds(KernelClass::K1),
                t_k2: tm.seconds(KernelClass::K2),
                t_k3: tm.seconds(KernelClass::K3),
                t_k4: tm.seconds(KernelClass::K4),
                t_total: clock.now() - t_iter0,
            });
            state.iteration += 1;
        }

        Ok(SolveResult {
            status,
            objective: p.objective(&pt.xd, &pt.xs),
            point: pt,
            final_error,
            iterations: state.iteration,
            kkt_dim: dims.compressed_dim(),
            log,
        })
    }
}

/// Solves `p` with the reference kernel suite and no timing clock.
pub fn solve(p: &dyn MdsProblem, opts: &SolverOptions) -> Result<SolveResult, SolveError> {
    Solver::new(p, opts.clone()).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::{synthetic_problem, Dims, ProblemBounds, QuadraticProblem};
    use crate::linalg::DenseMatrix;
    use crate::linalg::TripletMatrix;
    use crate::INFINITY_SENTINEL;

    /// Unconstrained single dense variable with zero objective and the
    /// given bounds.
    fn one_var_problem(lo: f64, up: f64) -> QuadraticProblem {
        let dims = Dims {
            n_d: 1,
            n_s: 0,
            m_e: 0,
            m_i: 0,
        };
        let mut bounds = ProblemBounds::unbounded(&dims);
        bounds.xd_lo[0] = lo;
        bounds.xd_up[0] = up;
        QuadraticProblem::new(
            dims,
            bounds,
            vec![],
            DenseMatrix::zeros(1, 1),
            vec![],
            vec![0.0],
            vec![],
            0.0,
            DenseMatrix::zeros(0, 1),
            TripletMatrix::new(0, 0),
            DenseMatrix::zeros(0, 1),
            TripletMatrix::new(0, 0),
        )
    }

    #[test]
    fn barrier_phi_closed_forms() {
        // no finite bounds: phi = f at any mu
        let free = one_var_problem(-INFINITY_SENTINEL, INFINITY_SENTINEL);
        let mut pt = IteratePoint::zeros(&free.dims());
        pt.xd[0] = 3.0;
        assert_eq!(barrier_phi(&free, &pt, 0.7).unwrap(), 0.0);

        // mu = 0: phi = f
        let boxed = one_var_problem(0.0, INFINITY_SENTINEL);
        let mut pt = IteratePoint::zeros(&boxed.dims());
        pt.xd[0] = 2.0;
        assert_eq!(barrier_phi(&boxed, &pt, 0.0).unwrap(), 0.0);

        // x in [0, inf) at x = 2, f = 0, mu = 1: phi = -ln 2
        let phi = barrier_phi(&boxed, &pt, 1.0).unwrap();
        assert!((phi + libm::log(2.0)).abs() < 1e-15);

        // boundary point is rejected for mu > 0
        pt.xd[0] = 0.0;
        assert!(barrier_phi(&boxed, &pt, 1.0).is_err());
    }

    #[test]
    fn complementarity_residual_before_scaling() {
        // single lower bound, distance 2, dual 1, mu 0 -> residual 2
        let p = one_var_problem(0.0, INFINITY_SENTINEL);
        let mut pt = IteratePoint::zeros(&p.dims());
        pt.xd[0] = 2.0;
        pt.z_lo_d[0] = 1.0;
        let e = kkt_error(&p, &pt, 0.0, &SolverOptions::default()).unwrap();
        assert_eq!(e.complementarity, 2.0);
    }

    #[test]
    fn exact_unconstrained_minimum_has_zero_error() {
        // min ½x² over free x: at x = 0 with no duals, e_mu = 0 for any mu.
        let dims = Dims {
            n_d: 1,
            n_s: 0,
            m_e: 0,
            m_i: 0,
        };
        let p = QuadraticProblem::new(
            dims,
            ProblemBounds::unbounded(&dims),
            vec![],
            DenseMatrix::identity(1),
            vec![],
            vec![0.0],
            vec![],
            0.0,
            DenseMatrix::zeros(0, 1),
            TripletMatrix::new(0, 0),
            DenseMatrix::zeros(0, 1),
            TripletMatrix::new(0, 0),
        );
        let pt = IteratePoint::zeros(&dims);
        let e = kkt_error(&p, &pt, 0.3, &SolverOptions::default()).unwrap();
        assert_eq!(e.total, 0.0);
    }

    #[test]
    fn barrier_update_rule() {
        let opts = SolverOptions::default();
        // large error: unchanged
        assert_eq!(update_barrier(0.1, 10.0, &opts), 0.1);
        // solved subproblem: max(tol/10, min(0.2*0.1, 0.1^1.5)) = 0.02
        assert!((update_barrier(0.1, 0.0, &opts) - 0.02).abs() < 1e-15);
        // at the floor: unchanged forever
        let floor = opts.mu_floor();
        assert_eq!(update_barrier(floor, 0.0, &opts), floor);
    }

    #[test]
    fn initialize_pushes_interior() {
        let p = synthetic_problem(2);
        let opts = SolverOptions::default();

        // default start passes strict interiority
        let pt = initialize(&p, &opts, None).unwrap();
        let b = p.bounds();
        for i in 0..2 {
            assert!(pt.xd[i] > b.xd_lo[i] && pt.xd[i] < b.xd_up[i]);
            assert!(pt.xs[i] > b.xs_lo[i] && pt.xs[i] < b.xs_up[i]);
            assert!(pt.z_lo_d[i] > 0.0 && pt.z_up_d[i] > 0.0);
        }
        for i in 0..3 {
            if crate::is_finite_bound(b.h_lo[i]) {
                assert!(pt.s[i] > b.h_lo[i]);
            }
            assert!(pt.s[i] < b.h_up[i]);
            assert!(pt.v_up[i] > 0.0);
        }

        // interior start point is kept in the primal part
        let pt = initialize(&p, &opts, Some((&[0.5, 0.25], &[0.5, 0.25]))).unwrap();
        assert_eq!(pt.xd, vec![0.5, 0.25]);
        assert_eq!(pt.xs, vec![0.5, 0.25]);

        // a start on the bound gets pushed inside by the kappa_1 rule
        let pt = initialize(&p, &opts, Some((&[10.0, 0.0], &[0.0, 0.0]))).unwrap();
        assert!((pt.xd[0] - (10.0 - 0.01 * 10.0)).abs() < 1e-12);
    }

    #[test]
    fn initialize_rejects_inverted_bounds() {
        let mut p = one_var_problem(1.0, INFINITY_SENTINEL);
        p.bounds_mut().xd_up[0] = 0.0; // lo > up
        assert!(matches!(
            initialize(&p, &SolverOptions::default(), None),
            Err(InitError::EmptyInterior { .. })
        ));
    }
}
