//! Random regularized KKT instances for the compression and inertia suites.

use mdsipm::ipm::KktSystem4;
use mdsipm::nlp::Dims;
use mdsipm::rng::SplitMix64;
use mdsipm::{DenseMatrix, TripletMatrix};

/// Owned data of one random 4x4-block KKT instance; `system()` borrows it
/// as the solver-facing view. `q_ss`, `dh` strictly positive and the dense
/// Hessian block positive definite, so the instance is a regular saddle
/// point almost surely.
#[derive(Clone, Debug)]
pub struct RandomKkt4 {
    pub dims: Dims,
    pub q_ss: Vec<f64>,
    pub qdd: DenseMatrix,
    pub jsg: TripletMatrix,
    pub jsh: TripletMatrix,
    pub jdg: DenseMatrix,
    pub jdh: DenseMatrix,
    pub dh: Vec<f64>,
    pub r_xs: Vec<f64>,
    pub r_xd: Vec<f64>,
    pub r_yg: Vec<f64>,
    pub r_yh: Vec<f64>,
    pub delta_c: f64,
}

impl RandomKkt4 {
    pub fn system(&self) -> KktSystem4<'_> {
        KktSystem4 {
            q_ss: self.q_ss.clone(),
            qdd: self.qdd.clone(),
            jsg: &self.jsg,
            jsh: &self.jsh,
            jdg: &self.jdg,
            jdh: &self.jdh,
            dh: &self.dh,
            r_xs: &self.r_xs,
            r_xd: &self.r_xd,
            r_yg: &self.r_yg,
            r_yh: &self.r_yh,
            delta_w: 0.0,
            delta_c: self.delta_c,
        }
    }
}

fn sparse_block(rng: &mut SplitMix64, rows: usize, cols: usize) -> TripletMatrix {
    let mut t = TripletMatrix::new(rows, cols);
    if cols == 0 {
        return t;
    }
    let density = (3.0 / cols as f64).min(1.0);
    for r in 0..rows {
        for c in 0..cols {
            if rng.chance(density) {
                t.push(r, c, rng.uniform(-1.0, 1.0));
                // occasional duplicate coordinate, values summing on apply
                if rng.chance(0.15) {
                    t.push(r, c, rng.uniform(-1.0, 1.0));
                }
            }
        }
    }
    t
}

/// Draws a random instance with `1 <= n_s <= max.n_s`, `1 <= n_d <= max.n_d`,
/// `m_e <= max.m_e`, `1 <= m_i <= max.m_i`.
pub fn random_kkt4(rng: &mut SplitMix64, max: Dims) -> RandomKkt4 {
    let n_s = 1 + rng.below(max.n_s);
    let n_d = 1 + rng.below(max.n_d);
    let m_e = if max.m_e == 0 { 0 } else { rng.below(max.m_e + 1) };
    let m_i = 1 + rng.below(max.m_i);
    let dims = Dims { n_d, n_s, m_e, m_i };

    let q_ss: Vec<f64> = (0..n_s).map(|_| rng.uniform(0.5, 2.0)).collect();
    let dh: Vec<f64> = (0..m_i).map(|_| rng.uniform(0.5, 2.0)).collect();

    let mut m = DenseMatrix::zeros(n_d, n_d);
    for i in 0..n_d {
        for j in 0..n_d {
            m.set(i, j, rng.uniform(-1.0, 1.0));
        }
    }
    let mut qdd = DenseMatrix::zeros(n_d, n_d);
    for i in 0..n_d {
        for j in 0..=i {
            let mut s = 0.0;
            for t in 0..n_d {
                s += m.get(t, i) * m.get(t, j);
            }
            let v = s / n_d as f64 + if i == j { 0.5 } else { 0.0 };
            qdd.set(i, j, v);
            qdd.set(j, i, v);
        }
    }

    let dense_block = |rows: usize, rng: &mut SplitMix64| {
        let mut d = DenseMatrix::zeros(rows, n_d);
        for r in 0..rows {
            for c in 0..n_d {
                d.set(r, c, rng.uniform(-1.0, 1.0));
            }
        }
        d
    };
    let jdg = dense_block(m_e, rng);
    let jdh = dense_block(m_i, rng);
    let jsg = sparse_block(rng, m_e, n_s);
    let jsh = sparse_block(rng, m_i, n_s);

    let rand_vec = |n: usize, rng: &mut SplitMix64| -> Vec<f64> {
        (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect()
    };
    let delta_c = if rng.chance(0.3) { 1e-8 } else { 0.0 };

    RandomKkt4 {
        dims,
        q_ss,
        qdd,
        jsg,
        jsh,
        jdg,
        jdh,
        dh,
        r_xs: rand_vec(n_s, rng),
        r_xd: rand_vec(n_d, rng),
        r_yg: rand_vec(m_e, rng),
        r_yh: rand_vec(m_i, rng),
        delta_c,
    }
}
