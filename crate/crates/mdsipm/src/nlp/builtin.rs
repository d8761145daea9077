use alloc::vec;
use alloc::vec::Vec;

use super::{Dims, ProblemBounds, QuadraticProblem};
use crate::linalg::{DenseMatrix, TripletMatrix};
use crate::rng::SplitMix64;
use crate::INFINITY_SENTINEL;

/// Built-in convex benchmark problem with `n_d = n_s = k` and `m = n_s + 3`
/// constraints, sized so the compressed KKT matrix is `(2k+3) x (2k+3)`.
///
/// ```text
///   min  ½ Σ (x_s,i - 1)² + ½ x_dᵀ (I + eeᵀ/k) x_d - eᵀ x_d
///   s.t. (Σ x_s + Σ x_d) / k = 1
///        x_s,1 - x_d,1       = 0
///        x_s,i + (Σ_j x_d,j) / k <= 2          (i = 1..k)
///        0.5 <= (Σ_j x_d,j) / k  <= 3
///        -10 <= x_s, x_d <= 10
/// ```
///
/// The dense Hessian block `I + eeᵀ/k` is fully dense, the sparse-sparse
/// Hessian is the identity diagonal, and every constraint is linear.
pub fn synthetic_problem(k: usize) -> QuadraticProblem {
    assert!(k >= 1, "synthetic problem requires k >= 1");
    let dims = Dims {
        n_d: k,
        n_s: k,
        m_e: 2,
        m_i: k + 1,
    };
    let inv_k = 1.0 / k as f64;

    let mut hd = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            hd.set(i, j, inv_k + if i == j { 1.0 } else { 0.0 });
        }
    }
    let qss = vec![1.0; k];
    let cd = vec![-1.0; k];
    let cs = vec![-1.0; k];
    let c0 = 0.5 * k as f64;

    // Equalities: average of all variables equals one; first sparse and
    // first dense variable tied together.
    let mut jdg = DenseMatrix::zeros(2, k);
    let mut jsg = TripletMatrix::with_capacity(2, k, k + 1);
    for j in 0..k {
        jdg.set(0, j, inv_k);
        jsg.push(0, j, inv_k);
    }
    jsg.push(1, 0, 1.0);
    jdg.set(1, 0, -1.0);
    let g_rhs = vec![1.0, 0.0];

    // Inequalities: k one-sided rows coupling each sparse variable to the
    // dense average, plus one two-sided row on the dense average alone.
    let mut jdh = DenseMatrix::zeros(k + 1, k);
    let mut jsh = TripletMatrix::with_capacity(k + 1, k, k);
    for i in 0..k {
        jsh.push(i, i, 1.0);
        for j in 0..k {
            jdh.set(i, j, inv_k);
        }
    }
    for j in 0..k {
        jdh.set(k, j, inv_k);
    }
    let mut h_lo = vec![-INFINITY_SENTINEL; k + 1];
    let mut h_up = vec![2.0; k + 1];
    h_lo[k] = 0.5;
    h_up[k] = 3.0;

    let bounds = ProblemBounds {
        xd_lo: vec![-10.0; k],
        xd_up: vec![10.0; k],
        xs_lo: vec![-10.0; k],
        xs_up: vec![10.0; k],
        h_lo,
        h_up,
    };

    QuadraticProblem::new(
        dims, bounds, g_rhs, hd, qss, cd, cs, c0, jdg, jsg, jdh, jsh,
    )
}

/// Seeded random convex quadratic MDS problem.
///
/// The dense Hessian is `MᵀM/n_d + I` (positive definite), the sparse
/// Hessian diagonal is uniform in `[0.5, 2]`, constraint blocks are random
/// with triplet density `3/n_s`, and bounds are centered so that a sampled
/// reference point is strictly interior and the constraint ranges bracket
/// its constraint values. Deterministic in the seed.
pub fn random_problem(
    seed: u64,
    n_d: usize,
    n_s: usize,
    m_e: usize,
    m_i: usize,
) -> QuadraticProblem {
    assert!(m_e + m_i >= 1, "random problem requires m_E + m_I >= 1");
    let dims = Dims { n_d, n_s, m_e, m_i };
    let mut rng = SplitMix64::new(seed ^ 0x6d64_7369_706d_u64);

    let mut m = DenseMatrix::zeros(n_d, n_d);
    for i in 0..n_d {
        for j in 0..n_d {
            m.set(i, j, rng.uniform(-1.0, 1.0));
        }
    }
    let mut hd = DenseMatrix::zeros(n_d, n_d);
    let scale = 1.0 / n_d.max(1) as f64;
    for i in 0..n_d {
        for j in 0..=i {
            let mut s = 0.0;
            for t in 0..n_d {
                s += m.get(t, i) * m.get(t, j);
            }
            let v = s * scale + if i == j { 1.0 } else { 0.0 };
            hd.set(i, j, v);
            hd.set(j, i, v);
        }
    }

    let qss: Vec<f64> = (0..n_s).map(|_| rng.uniform(0.5, 2.0)).collect();
    let cd: Vec<f64> = (0..n_d).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let cs: Vec<f64> = (0..n_s).map(|_| rng.uniform(-1.0, 1.0)).collect();

    let density = if n_s == 0 {
        0.0
    } else {
        (3.0 / n_s as f64).min(1.0)
    };
    let fill_dense = |rows: usize, rng: &mut SplitMix64| {
        let mut j = DenseMatrix::zeros(rows, n_d);
        for r in 0..rows {
            for c in 0..n_d {
                j.set(r, c, rng.uniform(-1.0, 1.0));
            }
        }
        j
    };
    let fill_sparse = |rows: usize, rng: &mut SplitMix64| {
        let mut t = TripletMatrix::new(rows, n_s);
        for r in 0..rows {
            for c in 0..n_s {
                if rng.chance(density) {
                    t.push(r, c, rng.uniform(-1.0, 1.0));
                }
            }
        }
        t
    };
    let jdg = fill_dense(m_e, &mut rng);
    let jsg = fill_sparse(m_e, &mut rng);
    let jdh = fill_dense(m_i, &mut rng);
    let jsh = fill_sparse(m_i, &mut rng);

    // Reference interior point; constraints are centered on its values.
    let x0d: Vec<f64> = (0..n_d).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let x0s: Vec<f64> = (0..n_s).map(|_| rng.uniform(-1.0, 1.0)).collect();

    let apply = |jd: &DenseMatrix, js: &TripletMatrix, rows: usize| -> Vec<f64> {
        let mut out = vec![0.0; rows];
        for r in 0..rows {
            let mut s = 0.0;
            for (a, &x) in jd.row(r).iter().zip(&x0d) {
                s += a * x;
            }
            out[r] = s;
        }
        for (i, j, v) in js.iter() {
            out[i] += v * x0s[j];
        }
        out
    };
    let g_rhs = apply(&jdg, &jsg, m_e);
    let h0 = apply(&jdh, &jsh, m_i);

    let mut h_lo = vec![0.0; m_i];
    let mut h_up = vec![0.0; m_i];
    for i in 0..m_i {
        h_lo[i] = h0[i] - rng.uniform(0.5, 1.5);
        h_up[i] = h0[i] + rng.uniform(0.5, 1.5);
        // sometimes one-sided, never doubly infinite
        if rng.chance(0.25) {
            h_lo[i] = -INFINITY_SENTINEL;
        } else if rng.chance(0.25) {
            h_up[i] = INFINITY_SENTINEL;
        }
    }

    let var_bounds = |n: usize, rng: &mut SplitMix64| -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![0.0; n];
        let mut up = vec![0.0; n];
        for i in 0..n {
            lo[i] = -10.0 - rng.uniform(0.0, 5.0);
            up[i] = 10.0 + rng.uniform(0.0, 5.0);
            if rng.chance(0.15) {
                lo[i] = -INFINITY_SENTINEL;
            } else if rng.chance(0.15) {
                up[i] = INFINITY_SENTINEL;
            }
        }
        (lo, up)
    };
    let (xd_lo, xd_up) = var_bounds(n_d, &mut rng);
    let (xs_lo, xs_up) = var_bounds(n_s, &mut rng);

    let bounds = ProblemBounds {
        xd_lo,
        xd_up,
        xs_lo,
        xs_up,
        h_lo,
        h_up,
    };

    QuadraticProblem::new(
        dims, bounds, g_rhs, hd, qss, cd, cs, 0.0, jdg, jsg, jdh, jsh,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::{eval_all, validate_problem, EvalBundle, MdsProblem};

    #[test]
    fn synthetic_structure() {
        for k in [1, 2, 10] {
            let p = synthetic_problem(k);
            let d = p.dims();
            assert_eq!(d.n_d, k);
            assert_eq!(d.n_s, k);
            assert_eq!(d.m(), d.n_s + 3);
            assert_eq!(d.compressed_dim(), 2 * k + 3);
            assert!(validate_problem(&p).is_valid());
        }
        // k=1: n=2 variables, m=4 constraints, compressed dimension 5
        let p = synthetic_problem(1);
        assert_eq!(p.dims().n(), 2);
        assert_eq!(p.dims().m(), 4);
        assert_eq!(p.dims().compressed_dim(), 5);
        assert_eq!(synthetic_problem(10).dims().compressed_dim(), 23);
    }

    #[test]
    fn synthetic_objective_closed_form() {
        let k = 3;
        let p = synthetic_problem(k);
        // at x_s = e, x_d = 0: f = 0 + 0 - 0 = 0
        let xs = vec![1.0; k];
        let xd = vec![0.0; k];
        assert!((p.objective(&xd, &xs) - 0.0).abs() < 1e-14);
        // at x_s = 0, x_d = 0: f = k/2
        assert!((p.objective(&vec![0.0; k], &vec![0.0; k]) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn random_problem_is_deterministic_and_valid() {
        let p1 = random_problem(1, 3, 4, 1, 2);
        let p2 = random_problem(1, 3, 4, 1, 2);
        assert!(validate_problem(&p1).is_valid());

        let xd = vec![0.1, -0.2, 0.3];
        let xs = vec![0.0, 0.5, -0.5, 0.25];
        let yg = vec![0.7];
        let yh = vec![-0.3, 0.2];
        let mut b1 = EvalBundle::new(&p1.dims());
        let mut b2 = EvalBundle::new(&p2.dims());
        eval_all(&p1, &xd, &xs, &yg, &yh, &mut b1).unwrap();
        eval_all(&p2, &xd, &xs, &yg, &yh, &mut b2).unwrap();
        assert_eq!(b1.f, b2.f);
        assert_eq!(b1.grad_d, b2.grad_d);
        assert_eq!(b1.g_val, b2.g_val);
        assert_eq!(b1.h_val, b2.h_val);
        assert_eq!(b1.qss, b2.qss);
        assert_eq!(b1.jac.jsh.values(), b2.jac.jsh.values());
    }

    #[test]
    fn random_problem_seeds_differ() {
        let p1 = random_problem(1, 3, 4, 1, 2);
        let p2 = random_problem(2, 3, 4, 1, 2);
        assert_ne!(p1.eq_rhs(), p2.eq_rhs());
    }
}
