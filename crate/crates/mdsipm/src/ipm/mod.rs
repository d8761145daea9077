//! Filter line-search interior-point method over the compressed mixed
//! dense-sparse KKT systems.
//!
//! One iteration: evaluate the model, measure the optimality error, drive
//! the barrier parameter, assemble the 4x4-block system, compress it by
//! eliminating the sparse variables, factorize with inertia correction,
//! recover the full-space direction, and run the filter line search.

mod filter;
mod kkt;
mod observer;
mod options;
mod point;
mod result;
mod solver;
mod timing;

pub use filter::Filter;
pub use kkt::{
    build_diagonals, build_residuals, compress, recover_sparse_step, CompressedKkt, Diagonals,
    KktBuilder, KktError, KktResiduals, KktSystem4,
};
pub use observer::{IterationObserver, NoopObserver, StepRecord};
pub use options::SolverOptions;
pub use point::{Direction, IteratePoint};
pub use result::{BarrierState, IterationLog, SolveResult, SolveStatus};
pub use solver::{
    barrier_phi, initialize, kkt_error, line_search, solve, solve_with_inertia_correction,
    update_barrier, CorrectedStep, IcFailure, InitError, LineSearchFailure, LineSearchOutcome,
    OptimalityError, SolveError, Solver,
};
pub use timing::{KernelClass, KernelTimers};
