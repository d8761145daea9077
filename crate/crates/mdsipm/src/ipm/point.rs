use alloc::vec;
use alloc::vec::Vec;

use crate::nlp::Dims;

/// Full primal-dual iterate of the barrier subproblem.
///
/// Strict interiority invariant: every finite-bounded primal and slack
/// component lies strictly inside its bounds; bound duals are strictly
/// positive for finite bounds and exactly zero for infinite ones.
#[derive(Clone, Debug)]
pub struct IteratePoint {
    pub xd: Vec<f64>,
    pub xs: Vec<f64>,
    /// Inequality slacks, `m_i` entries boxed by `[h_lo, h_up]`.
    pub s: Vec<f64>,
    /// Equality multipliers.
    pub y_g: Vec<f64>,
    /// Inequality multipliers (for `h(x) - s = 0`).
    pub y_h: Vec<f64>,
    pub z_lo_d: Vec<f64>,
    pub z_up_d: Vec<f64>,
    pub z_lo_s: Vec<f64>,
    pub z_up_s: Vec<f64>,
    /// Slack-bound duals.
    pub v_lo: Vec<f64>,
    pub v_up: Vec<f64>,
}

impl IteratePoint {
    pub fn zeros(dims: &Dims) -> Self {
        Self {
            xd: vec![0.0; dims.n_d],
            xs: vec![0.0; dims.n_s],
            s: vec![0.0; dims.m_i],
            y_g: vec![0.0; dims.m_e],
            y_h: vec![0.0; dims.m_i],
            z_lo_d: vec![0.0; dims.n_d],
            z_up_d: vec![0.0; dims.n_d],
            z_lo_s: vec![0.0; dims.n_s],
            z_up_s: vec![0.0; dims.n_s],
            v_lo: vec![0.0; dims.m_i],
            v_up: vec![0.0; dims.m_i],
        }
    }
}

/// Newton direction for every unknown of the barrier KKT system.
#[derive(Clone, Debug)]
pub struct Direction {
    pub dxd: Vec<f64>,
    pub dxs: Vec<f64>,
    pub ds: Vec<f64>,
    pub dy_g: Vec<f64>,
    pub dy_h: Vec<f64>,
    pub dz_lo_d: Vec<f64>,
    pub dz_up_d: Vec<f64>,
    pub dz_lo_s: Vec<f64>,
    pub dz_up_s: Vec<f64>,
    pub dv_lo: Vec<f64>,
    pub dv_up: Vec<f64>,
}

impl Direction {
    pub fn zeros(dims: &Dims) -> Self {
        Self {
            dxd: vec![0.0; dims.n_d],
            dxs: vec![0.0; dims.n_s],
            ds: vec![0.0; dims.m_i],
            dy_g: vec![0.0; dims.m_e],
            dy_h: vec![0.0; dims.m_i],
            dz_lo_d: vec![0.0; dims.n_d],
            dz_up_d: vec![0.0; dims.n_d],
            dz_lo_s: vec![0.0; dims.n_s],
            dz_up_s: vec![0.0; dims.n_s],
            dv_lo: vec![0.0; dims.m_i],
            dv_up: vec![0.0; dims.m_i],
        }
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0_f64;
        for v in [
            &self.dxd,
            &self.dxs,
            &self.ds,
            &self.dy_g,
            &self.dy_h,
            &self.dz_lo_d,
            &self.dz_up_d,
            &self.dz_lo_s,
            &self.dz_up_s,
            &self.dv_lo,
            &self.dv_up,
        ] {
            for &x in v.iter() {
                m = m.max(x.abs());
            }
        }
        m
    }
}
