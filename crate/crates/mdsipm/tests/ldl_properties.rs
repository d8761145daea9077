//! Oracle-backed properties of the Bunch-Kaufman factorization:
//! reconstruction accuracy, exact inertia versus eigenvalue sign counts,
//! Sylvester invariance under congruence, and solve residuals.

use mdsipm::ldl::{bk_factorize, ldl_inertia, ldl_solve, Inertia};
use mdsipm::rng::SplitMix64;
use mdsipm::DenseMatrix;
use mdsipm_oracles::dense::{congruence, lu_solve, random_nonsingular, residual_inf};
use mdsipm_oracles::eig::{eigenvalues_bounded_away, sign_counts};
use mdsipm_oracles::random_symmetric;

fn reconstruction_error(a: &DenseMatrix) -> f64 {
    let f = bk_factorize(a).unwrap();
    let r = f.reconstruct();
    let n = a.rows();
    let mut err = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            err = err.max((r.get(i, j) - a.get(i, j)).abs());
        }
    }
    err
}

#[test]
fn reconstruction_bound_random_sizes_up_to_300() {
    let mut rng = SplitMix64::new(0x1d1);
    for trial in 0..40 {
        let n = 1 + rng.below(300);
        let a = random_symmetric(&mut rng, n);
        let bound = 100.0 * n as f64 * f64::EPSILON * a.inf_norm();
        let err = reconstruction_error(&a);
        assert!(
            err <= bound,
            "trial {trial}: n={n} reconstruction error {err:.3e} exceeds {bound:.3e}"
        );
    }
}

#[test]
fn inertia_matches_eigenvalue_sign_counts() {
    let mut rng = SplitMix64::new(0x1d2);
    let mut done = 0;
    while done < 60 {
        let n = 1 + rng.below(40);
        let a = random_symmetric(&mut rng, n);
        // keep only instances with eigenvalues clearly away from zero so
        // both counters agree on what "zero" means
        if !eigenvalues_bounded_away(&a, 1e-6 * a.inf_norm().max(1.0)) {
            continue;
        }
        let f = bk_factorize(&a).unwrap();
        let got = ldl_inertia(&f);
        let want = sign_counts(&a, f.zero_tol());
        assert_eq!(
            (got.pos, got.zero, got.neg),
            (want.pos, want.zero, want.neg),
            "inertia mismatch at n={n}"
        );
        done += 1;
    }
}

#[test]
fn inertia_identity_and_exchange() {
    let f = bk_factorize(&DenseMatrix::identity(4)).unwrap();
    assert_eq!(
        f.inertia(),
        Inertia {
            pos: 4,
            zero: 0,
            neg: 0
        }
    );
    let x = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let f = bk_factorize(&x).unwrap();
    assert_eq!(
        f.inertia(),
        Inertia {
            pos: 1,
            zero: 0,
            neg: 1
        }
    );
}

#[test]
fn sylvester_invariance_under_congruence() {
    let mut rng = SplitMix64::new(0x1d3);
    for _ in 0..30 {
        let n = 1 + rng.below(30);
        let a = random_symmetric(&mut rng, n);
        let s = random_nonsingular(&mut rng, n);
        let b = congruence(&a, &s);
        let ia = bk_factorize(&a).unwrap().inertia();
        let ib = bk_factorize(&b).unwrap().inertia();
        assert_eq!(ia, ib, "congruence changed the inertia at n={n}");
    }
}

#[test]
fn solve_round_trips_500_seeds() {
    let mut rng = SplitMix64::new(0x1d4);
    for trial in 0..500 {
        let n = 1 + rng.below(40);
        let a = random_symmetric(&mut rng, n);
        let f = match bk_factorize(&a) {
            Ok(f) => f,
            Err(e) => panic!("factorization failed on trial {trial}: {e}"),
        };
        if f.inertia().zero > 0 {
            continue; // numerically singular draw
        }
        let b: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let x = ldl_solve(&f, &b).unwrap();
        let resid = residual_inf(&a, &x, &b);
        let xnorm = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let bnorm = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        // relative residual bound c*n*eps with a generous constant
        let denom = a.inf_norm() * xnorm + bnorm;
        assert!(
            resid <= 1000.0 * n as f64 * f64::EPSILON * denom,
            "trial {trial}: n={n} residual {resid:.3e} too large (denom {denom:.3e})"
        );
    }
}

#[test]
fn solve_matches_row_reduction_oracle() {
    // well-conditioned shifted random symmetric 20x20
    let mut rng = SplitMix64::new(0x1d5);
    for _ in 0..20 {
        let n = 20;
        let mut a = random_symmetric(&mut rng, n);
        for i in 0..n {
            a.add_at(i, i, 25.0); // diagonally dominant shift
        }
        let b: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let x = ldl_solve(&bk_factorize(&a).unwrap(), &b).unwrap();
        let x_oracle = lu_solve(&a, &b).unwrap();
        for i in 0..n {
            let rel = (x[i] - x_oracle[i]).abs() / (1.0 + x_oracle[i].abs());
            assert!(rel < 1e-10, "component {i}: {} vs {}", x[i], x_oracle[i]);
        }
    }
}
