use alloc::vec::Vec;

use crate::ipm::filter::Filter;
use crate::ipm::point::IteratePoint;
use crate::ldl::Inertia;

/// Terminal state of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// Optimality error `e_0 <= tol`.
    Optimal,
    MaxIter,
    /// The line search backtracked to its floor; a feasibility restoration
    /// phase would be required and is not implemented.
    RestorationNeeded,
    /// Regularization exhausted without reaching the required inertia.
    SingularSystem,
    /// A model evaluator produced a non-finite value.
    EvalFailure,
}

/// Mutable state of the barrier homotopy.
#[derive(Clone, Debug)]
pub struct BarrierState {
    pub mu: f64,
    pub iteration: usize,
    pub filter: Filter,
    /// Last successful primal regularization; warm-starts the next episode.
    pub delta_w_last: f64,
}

impl BarrierState {
    pub fn new(mu0: f64) -> Self {
        Self {
            mu: mu0,
            iteration: 0,
            filter: Filter::new(),
            delta_w_last: 0.0,
        }
    }
}

/// One per-iteration log record. Timing columns split wall-clock seconds by
/// kernel class: K1 dense vector ops, K2 mixed matrix-vector products, K3
/// fused compression assembly, K4 dense factorization and solves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationLog {
    pub iter: usize,
    pub mu: f64,
    /// Constraint violation (1-norm) at the accepted point.
    pub theta: f64,
    /// Barrier objective at the accepted point.
    pub phi: f64,
    pub alpha_primal: f64,
    pub alpha_dual: f64,
    pub delta_w: f64,
    pub delta_c: f64,
    /// Inertia of the accepted compressed factorization.
    pub inertia: Inertia,
    pub t_k1: f64,
    pub t_k2: f64,
    pub t_k3: f64,
    pub t_k4: f64,
    pub t_total: f64,
}

/// Result of a solve: terminal status, final iterate, the optimality error
/// at that iterate, and the per-iteration log.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub point: IteratePoint,
    /// Optimality error `e_0` at the returned point.
    pub final_error: f64,
    pub iterations: usize,
    /// Objective value at the returned point.
    pub objective: f64,
    /// Dimension of the compressed KKT matrix that was factorized.
    pub kkt_dim: usize,
    pub log: Vec<IterationLog>,
}
