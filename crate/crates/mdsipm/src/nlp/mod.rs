//! Problem abstraction for mixed dense-sparse nonlinear programs.
//!
//! A problem has the shape
//!
//! ```text
//!   min  f(x_d, x_s)
//!   s.t. g(x_d, x_s)  = g_E                      (m_E equalities)
//!        h_lo <= h(x_d, x_s) <= h_up             (m_I inequality ranges)
//!        xd_lo <= x_d <= xd_up,  xs_lo <= x_s <= xs_up
//! ```
//!
//! with the structural contract that makes the KKT compression work:
//! no cross-term Hessian blocks exist (the interface simply has no slot for
//! them) and the sparse-sparse Lagrangian Hessian is a nonnegative diagonal,
//! supplied as a vector. Jacobians split into dense blocks (w.r.t. `x_d`)
//! and triplet blocks (w.r.t. `x_s`).
//!
//! Bounds use the `1e20` sentinel for infinity; every inequality row and
//! every variable must keep at least one finite side.

mod builtin;
mod quadratic;

pub use builtin::{random_problem, synthetic_problem};
pub use quadratic::QuadraticProblem;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::{DenseMatrix, TripletMatrix};
use crate::{is_finite_bound, INFINITY_SENTINEL};

/// Problem dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    /// Dense variables.
    pub n_d: usize,
    /// Sparse variables.
    pub n_s: usize,
    /// Equality constraints.
    pub m_e: usize,
    /// Inequality constraints.
    pub m_i: usize,
}

impl Dims {
    pub fn n(&self) -> usize {
        self.n_d + self.n_s
    }

    /// Total constraints excluding simple bounds.
    pub fn m(&self) -> usize {
        self.m_e + self.m_i
    }

    /// Dimension of the compressed KKT matrix: the full dimension minus `n_s`.
    pub fn compressed_dim(&self) -> usize {
        self.n_d + self.m()
    }

    /// Dimension of the uncompressed 4x4-block KKT matrix.
    pub fn full_dim(&self) -> usize {
        self.n() + self.m()
    }
}

/// Variable and inequality bounds, `1e20` sentinel convention.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemBounds {
    pub xd_lo: Vec<f64>,
    pub xd_up: Vec<f64>,
    pub xs_lo: Vec<f64>,
    pub xs_up: Vec<f64>,
    pub h_lo: Vec<f64>,
    pub h_up: Vec<f64>,
}

impl ProblemBounds {
    /// All-free bounds of the given dimensions.
    pub fn unbounded(dims: &Dims) -> Self {
        Self {
            xd_lo: vec![-INFINITY_SENTINEL; dims.n_d],
            xd_up: vec![INFINITY_SENTINEL; dims.n_d],
            xs_lo: vec![-INFINITY_SENTINEL; dims.n_s],
            xs_up: vec![INFINITY_SENTINEL; dims.n_s],
            h_lo: vec![-INFINITY_SENTINEL; dims.m_i],
            h_up: vec![INFINITY_SENTINEL; dims.m_i],
        }
    }
}

/// Jacobian blocks of the constraints: dense w.r.t. `x_d`, triplet w.r.t.
/// `x_s`.
#[derive(Clone, Debug)]
pub struct JacobianBlocks {
    /// `m_e x n_d`.
    pub jdg: DenseMatrix,
    /// `m_e x n_s`.
    pub jsg: TripletMatrix,
    /// `m_i x n_d`.
    pub jdh: DenseMatrix,
    /// `m_i x n_s`.
    pub jsh: TripletMatrix,
}

impl JacobianBlocks {
    pub fn zeros(dims: &Dims) -> Self {
        Self {
            jdg: DenseMatrix::zeros(dims.m_e, dims.n_d),
            jsg: TripletMatrix::new(dims.m_e, dims.n_s),
            jdh: DenseMatrix::zeros(dims.m_i, dims.n_d),
            jsh: TripletMatrix::new(dims.m_i, dims.n_s),
        }
    }
}

/// Mixed dense-sparse NLP evaluation interface.
///
/// Evaluators must be deterministic and side-effect free; the solver may
/// call them at any strictly interior point and caches nothing on the
/// model's behalf.
pub trait MdsProblem {
    fn dims(&self) -> Dims;

    fn bounds(&self) -> &ProblemBounds;

    /// Equality right-hand sides `g_E`, length `m_e`.
    fn eq_rhs(&self) -> &[f64];

    fn objective(&self, xd: &[f64], xs: &[f64]) -> f64;

    /// Objective gradient split into dense and sparse parts.
    fn objective_grad(&self, xd: &[f64], xs: &[f64], grad_d: &mut [f64], grad_s: &mut [f64]);

    /// Equality constraint values `g(x)`, length `m_e` (left-hand side; the
    /// solver subtracts `g_E`).
    fn eq_constraints(&self, xd: &[f64], xs: &[f64], out: &mut [f64]);

    /// Inequality constraint values `h(x)`, length `m_i`.
    fn ineq_constraints(&self, xd: &[f64], xs: &[f64], out: &mut [f64]);

    /// Fills all four Jacobian blocks at the given point.
    fn jacobians(&self, xd: &[f64], xs: &[f64], jac: &mut JacobianBlocks);

    /// Lagrangian Hessian blocks at `(x, y)`: the dense block
    /// `Qdd = ∇²_dd f + Σ y_g,i ∇²_dd g_i + Σ y_h,i ∇²_dd h_i` and the
    /// diagonal of the sparse block. The objective part of `qss` must be
    /// nonnegative.
    fn lagrangian_hessian(
        &self,
        xd: &[f64],
        xs: &[f64],
        y_g: &[f64],
        y_h: &[f64],
        qdd: &mut DenseMatrix,
        qss: &mut [f64],
    );
}

/// Everything the solver needs at one evaluation point.
#[derive(Clone, Debug)]
pub struct EvalBundle {
    pub f: f64,
    pub grad_d: Vec<f64>,
    pub grad_s: Vec<f64>,
    pub g_val: Vec<f64>,
    pub h_val: Vec<f64>,
    pub jac: JacobianBlocks,
    pub qdd: DenseMatrix,
    pub qss: Vec<f64>,
}

impl EvalBundle {
    pub fn new(dims: &Dims) -> Self {
        Self {
            f: 0.0,
            grad_d: vec![0.0; dims.n_d],
            grad_s: vec![0.0; dims.n_s],
            g_val: vec![0.0; dims.m_e],
            h_val: vec![0.0; dims.m_i],
            jac: JacobianBlocks::zeros(dims),
            qdd: DenseMatrix::zeros(dims.n_d, dims.n_d),
            qss: vec![0.0; dims.n_s],
        }
    }
}

/// Evaluation failure: an evaluator produced a non-finite value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("evaluator produced a non-finite value in {component} at entry {index}")]
pub struct EvalError {
    pub component: &'static str,
    pub index: usize,
}

fn first_non_finite(xs: &[f64]) -> Option<usize> {
    xs.iter().position(|v| !v.is_finite())
}

/// Evaluates all model quantities at `(x, y)` into `bundle`, with the
/// multiplier-weighted constraint Hessians folded into the Hessian blocks.
pub fn eval_all(
    p: &dyn MdsProblem,
    xd: &[f64],
    xs: &[f64],
    y_g: &[f64],
    y_h: &[f64],
    bundle: &mut EvalBundle,
) -> Result<(), EvalError> {
    bundle.f = p.objective(xd, xs);
    if !bundle.f.is_finite() {
        return Err(EvalError {
            component: "objective",
            index: 0,
        });
    }
    p.objective_grad(xd, xs, &mut bundle.grad_d, &mut bundle.grad_s);
    p.eq_constraints(xd, xs, &mut bundle.g_val);
    p.ineq_constraints(xd, xs, &mut bundle.h_val);
    p.jacobians(xd, xs, &mut bundle.jac);
    p.lagrangian_hessian(xd, xs, y_g, y_h, &mut bundle.qdd, &mut bundle.qss);

    let checks: [(&'static str, &[f64]); 7] = [
        ("grad_d", &bundle.grad_d),
        ("grad_s", &bundle.grad_s),
        ("g", &bundle.g_val),
        ("h", &bundle.h_val),
        ("qdd", bundle.qdd.as_slice()),
        ("qss", &bundle.qss),
        ("jacobian dense g", bundle.jac.jdg.as_slice()),
    ];
    for (name, data) in checks {
        if let Some(index) = first_non_finite(data) {
            return Err(EvalError {
                component: name,
                index,
            });
        }
    }
    for (name, t) in [
        ("jacobian sparse g", &bundle.jac.jsg),
        ("jacobian sparse h", &bundle.jac.jsh),
    ] {
        if let Some(index) = first_non_finite(t.values()) {
            return Err(EvalError {
                component: name,
                index,
            });
        }
    }
    if let Some(index) = first_non_finite(bundle.jac.jdh.as_slice()) {
        return Err(EvalError {
            component: "jacobian dense h",
            index,
        });
    }
    Ok(())
}

/// Outcome of [`validate_problem`]: the list of violated structural
/// requirements, empty when the problem is well formed.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_range_pair(
    report: &mut Vec<String>,
    what: &str,
    lo: &[f64],
    up: &[f64],
    require_one_finite: bool,
) {
    for i in 0..lo.len().min(up.len()) {
        if lo[i] >= up[i] {
            report.push(format!("{what} bounds not strictly ordered at entry {i}"));
        }
        if require_one_finite && !is_finite_bound(lo[i]) && !is_finite_bound(up[i]) {
            report.push(format!("no finite bound on {what} {i}"));
        }
    }
}

/// Checks the structural invariants of a problem: bound vector shapes,
/// strictly ordered ranges with at least one finite side (for inequalities
/// and variables alike), finite equality right-hand sides, and a nonnegative
/// sparse Hessian diagonal at a reference interior point.
pub fn validate_problem(p: &dyn MdsProblem) -> ValidationReport {
    let dims = p.dims();
    let b = p.bounds();
    let mut violations = Vec::new();

    for (name, v, expect) in [
        ("xd_lo", b.xd_lo.len(), dims.n_d),
        ("xd_up", b.xd_up.len(), dims.n_d),
        ("xs_lo", b.xs_lo.len(), dims.n_s),
        ("xs_up", b.xs_up.len(), dims.n_s),
        ("h_lo", b.h_lo.len(), dims.m_i),
        ("h_up", b.h_up.len(), dims.m_i),
        ("g_E", p.eq_rhs().len(), dims.m_e),
    ] {
        if v != expect {
            violations.push(format!("{name} has {v} entries, expected {expect}"));
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }

    check_range_pair(&mut violations, "h", &b.h_lo, &b.h_up, true);
    check_range_pair(&mut violations, "dense variable", &b.xd_lo, &b.xd_up, true);
    check_range_pair(&mut violations, "sparse variable", &b.xs_lo, &b.xs_up, true);

    if let Some(i) = first_non_finite(p.eq_rhs()) {
        violations.push(format!("g_E has a non-finite entry at {i}"));
    }

    // A2 at a reference point: sparse Hessian diagonal must be nonnegative
    // with zero multipliers.
    let xd = midpoints(&b.xd_lo, &b.xd_up);
    let xs = midpoints(&b.xs_lo, &b.xs_up);
    let mut qdd = DenseMatrix::zeros(dims.n_d, dims.n_d);
    let mut qss = vec![0.0; dims.n_s];
    p.lagrangian_hessian(
        &xd,
        &xs,
        &vec![0.0; dims.m_e],
        &vec![0.0; dims.m_i],
        &mut qdd,
        &mut qss,
    );
    for (i, &q) in qss.iter().enumerate() {
        if !(q >= 0.0) {
            violations.push(format!(
                "sparse Hessian diagonal is negative at entry {i}: {q}"
            ));
        }
    }
    if !qdd.is_symmetric_within(1e-12) {
        violations.push(String::from("dense Hessian block is not symmetric"));
    }

    ValidationReport { violations }
}

fn midpoints(lo: &[f64], up: &[f64]) -> Vec<f64> {
    lo.iter()
        .zip(up)
        .map(|(&l, &u)| match (is_finite_bound(l), is_finite_bound(u)) {
            (true, true) => 0.5 * (l + u),
            (true, false) => l + 1.0,
            (false, true) => u - 1.0,
            (false, false) => 0.0,
        })
        .collect()
}

/// Built-in problem selection, parsed from the CLI string forms
/// `synthetic:<k>` and `random:<seed>:<n_d>:<n_s>:<m_E>:<m_I>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemSpec {
    Synthetic { k: usize },
    Random { seed: u64, dims: Dims },
}

impl ProblemSpec {
    pub fn instantiate(&self) -> QuadraticProblem {
        match *self {
            ProblemSpec::Synthetic { k } => synthetic_problem(k),
            ProblemSpec::Random { seed, dims } => {
                random_problem(seed, dims.n_d, dims.n_s, dims.m_e, dims.m_i)
            }
        }
    }
}

impl core::str::FromStr for ProblemSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split(':');
        match parts.next() {
            Some("synthetic") => {
                let k: usize = parts
                    .next()
                    .ok_or("synthetic:<k> requires a size")?
                    .parse()
                    .map_err(|e| format!("bad k: {e}"))?;
                if parts.next().is_some() {
                    return Err(String::from("synthetic:<k> takes exactly one field"));
                }
                if k < 1 {
                    return Err(String::from("synthetic problem requires k >= 1"));
                }
                Ok(ProblemSpec::Synthetic { k })
            }
            Some("random") => {
                let mut field = |name: &str| -> Result<usize, String> {
                    parts
                        .next()
                        .ok_or_else(|| format!("random spec missing {name}"))?
                        .parse()
                        .map_err(|e| format!("bad {name}: {e}"))
                };
                let seed = field("seed")? as u64;
                let n_d = field("n_d")?;
                let n_s = field("n_s")?;
                let m_e = field("m_E")?;
                let m_i = field("m_I")?;
                if parts.next().is_some() {
                    return Err(String::from("random spec has too many fields"));
                }
                if m_e + m_i < 1 {
                    return Err(String::from("random problem requires m_E + m_I >= 1"));
                }
                Ok(ProblemSpec::Random {
                    seed,
                    dims: Dims { n_d, n_s, m_e, m_i },
                })
            }
            _ => Err(format!(
                "unknown problem spec '{s}' (expected synthetic:<k> or random:<seed>:<n_d>:<n_s>:<m_E>:<m_I>)"
            )),
        }
    }
}
