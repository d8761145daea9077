use alloc::vec::Vec;

use crate::ipm::kkt::{CompressedKkt, KktSystem4};
use crate::ipm::point::IteratePoint;

/// Everything needed to replay one line-search acceptance decision offline:
/// the filter contents at decision time, the measures of the incumbent and
/// accepted points, and which acceptance branch fired.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub iter: usize,
    pub mu: f64,
    pub theta_old: f64,
    pub phi_old: f64,
    pub theta_new: f64,
    pub phi_new: f64,
    /// Directional derivative of the barrier objective along the step.
    pub dphi: f64,
    pub alpha_primal: f64,
    pub alpha_max: f64,
    pub alpha_dual: f64,
    /// Whether the Armijo branch (switching condition held) accepted the point.
    pub armijo: bool,
    /// Whether the filter was augmented with the incumbent pair.
    pub filter_augmented: bool,
    /// Filter entries at decision time.
    pub filter_before: Vec<(f64, f64)>,
}

/// Hook into the solve loop. All methods default to no-ops; implement what
/// the use case needs (KKT dumps, interiority audits, filter replay).
pub trait IterationObserver {
    /// Called once per iteration with the final (accepted) KKT system and
    /// its compression, before the step is taken.
    fn on_kkt(&mut self, _iter: usize, _k4: &KktSystem4<'_>, _compressed: &CompressedKkt) {}

    /// Called after a trial point is accepted.
    fn on_step(&mut self, _rec: &StepRecord) {}

    /// Called with the new iterate after the step and dual updates.
    fn on_iterate(&mut self, _iter: usize, _point: &IteratePoint) {}
}

/// Observer that does nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoopObserver;

impl IterationObserver for NoopObserver {}
