/// Scalar parameters of the filter line-search interior-point method.
///
/// Defaults follow the standard settings of the filter line-search method;
/// all values are strictly positive and `tau_min` lies in `(0, 1)`.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Convergence tolerance on the optimality error `e_0`.
    pub tol: f64,
    /// Initial barrier parameter.
    pub mu0: f64,
    pub max_iter: usize,
    /// Floor of the fraction-to-boundary factor `tau = max(tau_min, 1 - mu)`.
    pub tau_min: f64,
    /// Linear barrier reduction factor.
    pub kappa_mu: f64,
    /// Superlinear barrier reduction exponent.
    pub theta_mu: f64,
    /// Barrier-subproblem stop factor: accept when `e_mu <= kappa_epsilon * mu`.
    pub kappa_epsilon: f64,
    /// Filter margin on constraint violation.
    pub gamma_theta: f64,
    /// Filter margin on the barrier objective.
    pub gamma_phi: f64,
    /// Switching-condition exponent on the constraint violation.
    pub s_theta: f64,
    /// Switching-condition exponent on the objective model decrease.
    pub s_phi: f64,
    /// Armijo factor.
    pub eta_phi: f64,
    /// Dual safeguard width: bound duals are clipped into
    /// `[mu / (kappa_sigma * dist), kappa_sigma * mu / dist]`.
    pub kappa_sigma: f64,
    /// Base primal regularization.
    pub delta_w0: f64,
    pub delta_w_min: f64,
    pub delta_w_max: f64,
    /// Escalation factor of the primal regularization within one episode.
    pub kappa_w_plus: f64,
    /// First-trial multiplier applied to `delta_w0` when no earlier
    /// regularization succeeded.
    pub kappa_w_plus_first: f64,
    /// Warm-start shrink factor applied to the last successful regularization.
    pub kappa_w_minus: f64,
    /// Constraint regularization magnitude `delta_c = delta_c_bar * mu^kappa_c`.
    pub delta_c_bar: f64,
    pub kappa_c: f64,
    /// Interior push factor for the start point.
    pub kappa_1: f64,
    /// Cap in the optimality-error scaling factors.
    pub s_max: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            mu0: 0.1,
            max_iter: 500,
            tau_min: 0.99,
            kappa_mu: 0.2,
            theta_mu: 1.5,
            kappa_epsilon: 10.0,
            gamma_theta: 1e-5,
            gamma_phi: 1e-5,
            s_theta: 1.1,
            s_phi: 2.3,
            eta_phi: 1e-4,
            kappa_sigma: 1e10,
            delta_w0: 1e-4,
            delta_w_min: 1e-20,
            delta_w_max: 1e40,
            kappa_w_plus: 8.0,
            kappa_w_plus_first: 100.0,
            kappa_w_minus: 1.0 / 3.0,
            delta_c_bar: 1e-8,
            kappa_c: 0.25,
            kappa_1: 1e-2,
            s_max: 100.0,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_mu0(mut self, mu0: f64) -> Self {
        self.mu0 = mu0;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    /// Barrier floor: the homotopy never drives `mu` below this.
    pub fn mu_floor(&self) -> f64 {
        self.tol / 10.0
    }
}
