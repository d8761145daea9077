use alloc::boxed::Box;
use alloc::vec;

use super::*;
use crate::INFINITY_SENTINEL;

fn suites() -> [(&'static str, Box<dyn Kernels>); 2] {
    [
        (
            "default",
            make_linear_algebra(BackendSelector::default()).unwrap(),
        ),
        (
            "host-seq",
            make_linear_algebra(BackendSelector::host_sequential()).unwrap(),
        ),
    ]
}

#[test]
fn axpy_examples() {
    for (name, k) in suites() {
        // zero scalar leaves y unchanged
        let mut y = vec![3.0, 4.0];
        k.axpy(0.0, &[1.0, 2.0], &mut y).unwrap();
        assert_eq!(y, [3.0, 4.0], "{name}");
        // unit scalar copies x onto zero y
        let mut y = vec![0.0, 0.0];
        k.axpy(1.0, &[1.0, 1.0], &mut y).unwrap();
        assert_eq!(y, [1.0, 1.0], "{name}");
        // general case, hand-computed elementwise
        let mut y = vec![0.5, 0.5, 0.5];
        k.axpy(2.5, &[1.0, -2.0, 4.0], &mut y).unwrap();
        assert_eq!(y, [3.0, -4.5, 10.5], "{name}");
        // dimension mismatch
        let mut y = vec![0.0];
        assert!(matches!(
            k.axpy(1.0, &[1.0, 2.0], &mut y),
            Err(LinAlgError::Dimension { .. })
        ));
    }
}

#[test]
fn dot_examples() {
    for (_, k) in suites() {
        assert_eq!(k.dot(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(k.dot(&[1.0; 5], &[1.0; 5]).unwrap(), 5.0);
        assert_eq!(k.dot(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap(), 32.0);
        assert!(k.dot(&[1.0], &[1.0, 2.0]).is_err());
    }
}

#[test]
fn reduce_examples() {
    for (_, k) in suites() {
        assert_eq!(k.reduce(&[0.0, 0.0, 0.0], Reduction::InfNorm).unwrap(), 0.0);
        assert_eq!(k.reduce(&[3.0, -4.0], Reduction::TwoNorm).unwrap(), 5.0);
        assert_eq!(k.reduce(&[-7.0, 2.0, 5.0], Reduction::Min).unwrap(), -7.0);
        assert_eq!(k.reduce(&[-7.0, 2.0, 5.0], Reduction::Max).unwrap(), 5.0);
        assert_eq!(k.reduce(&[-1.0, 2.0], Reduction::OneNorm).unwrap(), 3.0);
        assert!(matches!(
            k.reduce(&[], Reduction::Min),
            Err(LinAlgError::EmptyInput(_))
        ));
        assert_eq!(k.reduce(&[], Reduction::OneNorm).unwrap(), 0.0);
    }
}

#[test]
fn max_step_examples() {
    let inf = INFINITY_SENTINEL;
    for (_, k) in suites() {
        // no movement
        let a = k
            .max_step_to_bound(&[0.3], &[0.0], &[0.0], &[1.0], 0.99)
            .unwrap();
        assert_eq!(a, 1.0);
        // single lower bound at unit distance
        let a = k
            .max_step_to_bound(&[0.0], &[-1.0], &[-1.0], &[inf], 0.99)
            .unwrap();
        assert!((a - 0.99).abs() < 1e-15);
        // per-component rule: min(0.9*0.5/1, 0.9*0.5/2) = 0.225
        let a = k
            .max_step_to_bound(&[0.5, 0.5], &[1.0, -2.0], &[0.0, 0.0], &[1.0, 1.0], 0.9)
            .unwrap();
        assert!((a - 0.225).abs() < 1e-15);
        // non-interior point
        assert!(matches!(
            k.max_step_to_bound(&[0.0], &[1.0], &[0.0], &[1.0], 0.9),
            Err(LinAlgError::NotInterior { index: 0 })
        ));
        // doubly-infinite bounds never restrict
        let a = k
            .max_step_to_bound(&[5.0], &[-1e9], &[-inf], &[inf], 0.99)
            .unwrap();
        assert_eq!(a, 1.0);
    }
}

#[test]
fn gemv_examples() {
    for (_, k) in suites() {
        let id = DenseMatrix::identity(2);
        let mut y = vec![0.0, 0.0];
        k.gemv(0.0, &mut y, 1.0, &id, &[5.0, 7.0], false).unwrap();
        assert_eq!(y, [5.0, 7.0]);

        let mut y = vec![1.0, 1.0];
        k.gemv(2.0, &mut y, 0.0, &id, &[9.0, 9.0], false).unwrap();
        assert_eq!(y, [2.0, 2.0]);

        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let mut y = vec![0.0, 0.0];
        k.gemv(0.0, &mut y, 1.0, &a, &[1.0, 1.0], false).unwrap();
        assert_eq!(y, [3.0, 7.0]);

        // transpose: A^T x
        let mut y = vec![0.0, 0.0];
        k.gemv(0.0, &mut y, 1.0, &a, &[1.0, 1.0], true).unwrap();
        assert_eq!(y, [4.0, 6.0]);

        let mut y = vec![0.0];
        assert!(k.gemv(0.0, &mut y, 1.0, &a, &[1.0, 1.0], false).is_err());
    }
}

#[test]
fn gemm_examples() {
    for (_, k) in suites() {
        let x = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]);
        let mut y = DenseMatrix::zeros(3, 2);
        k.gemm(0.0, &mut y, 1.0, &DenseMatrix::identity(3), &x)
            .unwrap();
        assert_eq!(y, x);

        let mut y = DenseMatrix::from_rows(&[&[1.0, -1.0], &[2.0, -2.0]]);
        let saved = y.clone();
        let a = DenseMatrix::identity(2);
        k.gemm(1.0, &mut y, 0.0, &a, &DenseMatrix::zeros(2, 2))
            .unwrap();
        assert_eq!(y, saved);

        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        let x = DenseMatrix::from_rows(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let mut y = DenseMatrix::zeros(2, 2);
        k.gemm(0.0, &mut y, 1.0, &a, &x).unwrap();
        assert_eq!(y, DenseMatrix::from_rows(&[&[3.0, 2.0], &[1.0, 1.0]]));
    }
}

#[test]
fn triplet_times_vec_examples() {
    for (_, k) in suites() {
        // empty matrix: y' = beta*y
        let a = TripletMatrix::new(2, 2);
        let mut y = vec![1.0, 2.0];
        k.triplet_times_vec(3.0, &mut y, 1.0, &a, &[9.0, 9.0], false)
            .unwrap();
        assert_eq!(y, [3.0, 6.0]);

        let id = TripletMatrix::identity(2);
        let mut y = vec![0.0, 0.0];
        k.triplet_times_vec(0.0, &mut y, 1.0, &id, &[4.0, 9.0], false)
            .unwrap();
        assert_eq!(y, [4.0, 9.0]);

        // duplicates sum: {(0,1,2),(0,1,3),(1,0,1)} applied to ones
        let a = TripletMatrix::from_entries(2, 2, &[(0, 1, 2.0), (0, 1, 3.0), (1, 0, 1.0)]);
        let mut y = vec![0.0, 0.0];
        k.triplet_times_vec(0.0, &mut y, 1.0, &a, &[1.0, 1.0], false)
            .unwrap();
        assert_eq!(y, [5.0, 1.0]);

        // transpose variant
        let mut y = vec![0.0, 0.0];
        k.triplet_times_vec(0.0, &mut y, 1.0, &a, &[1.0, 1.0], true)
            .unwrap();
        assert_eq!(y, [1.0, 5.0]);

        // out-of-range entry
        let bad = TripletMatrix::from_entries(2, 2, &[(0, 5, 1.0)]);
        let mut y = vec![0.0, 0.0];
        assert!(matches!(
            k.triplet_times_vec(0.0, &mut y, 1.0, &bad, &[1.0, 1.0], false),
            Err(LinAlgError::MalformedMatrix { .. })
        ));
    }
}

#[test]
fn mds_times_vec_examples() {
    for (_, k) in suites() {
        // both blocks zero
        let jsp = TripletMatrix::new(1, 1);
        let jde = DenseMatrix::zeros(1, 1);
        let mut y = vec![7.0];
        k.mds_times_vec(2.0, &mut y, 1.0, &jsp, &jde, &[1.0, 1.0])
            .unwrap();
        assert_eq!(y, [14.0]);

        // sparse identity + dense [2] on x = [3, 4] -> 3 + 8 = 11
        let jsp = TripletMatrix::identity(1);
        let jde = DenseMatrix::from_rows(&[&[2.0]]);
        let mut y = vec![0.0];
        k.mds_times_vec(0.0, &mut y, 1.0, &jsp, &jde, &[3.0, 4.0])
            .unwrap();
        assert_eq!(y, [11.0]);

        // alpha = 0 leaves beta*y
        let mut y = vec![5.0];
        k.mds_times_vec(1.0, &mut y, 0.0, &jsp, &jde, &[3.0, 4.0])
            .unwrap();
        assert_eq!(y, [5.0]);

        // x length must be the sum of block widths
        let mut y = vec![0.0];
        assert!(k.mds_times_vec(0.0, &mut y, 1.0, &jsp, &jde, &[1.0]).is_err());
    }
}

#[test]
fn fused_add_sdst_examples() {
    for (_, k) in suites() {
        // identity sandwich: I diag(3,4) I^T
        let id = TripletMatrix::identity(2);
        let mut m = DenseMatrix::zeros(2, 2);
        k.fused_add_sdst(&mut m, &id, &[3.0, 4.0], &id, 1.0).unwrap();
        assert_eq!(m, DenseMatrix::from_rows(&[&[3.0, 0.0], &[0.0, 4.0]]));

        // zero diagonal leaves M unchanged
        let mut m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let saved = m.clone();
        k.fused_add_sdst(&mut m, &id, &[0.0, 0.0], &id, 1.0).unwrap();
        assert_eq!(m, saved);

        // A (2x1), B (1x1), d=[2], sign=-1: -A diag(2) B^T = [[-6],[-12]]
        let a = TripletMatrix::from_entries(2, 1, &[(0, 0, 1.0), (1, 0, 2.0)]);
        let b = TripletMatrix::from_entries(1, 1, &[(0, 0, 3.0)]);
        let mut m = DenseMatrix::zeros(2, 1);
        k.fused_add_sdst(&mut m, &a, &[2.0], &b, -1.0).unwrap();
        assert_eq!(m, DenseMatrix::from_rows(&[&[-6.0], &[-12.0]]));
    }
}

#[test]
fn factory_selection() {
    assert!(make_linear_algebra(BackendSelector::default()).is_ok());
    assert!(make_linear_algebra(BackendSelector::host_sequential()).is_ok());
    // the default (legacy) suite has no parallel policy
    assert!(matches!(
        make_linear_algebra(BackendSelector {
            memory_space: MemorySpace::Default,
            execution: Execution::Parallel,
        }),
        Err(LinAlgError::Config(_))
    ));
    let par = make_linear_algebra(BackendSelector::host_parallel());
    if cfg!(feature = "parallel") {
        assert!(par.is_ok());
    } else {
        assert!(matches!(par, Err(LinAlgError::Config(_))));
    }
}

#[test]
fn default_and_host_sequential_bit_identical() {
    // Irrational-ish data so any reassociation would show up in the bits.
    let mut rng = crate::rng::SplitMix64::new(99);
    let reference = make_linear_algebra(BackendSelector::default()).unwrap();
    let host = make_linear_algebra(BackendSelector::host_sequential()).unwrap();
    for n in [1usize, 7, 64, 501] {
        let x: alloc::vec::Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let y0: alloc::vec::Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();

        let d1 = reference.dot(&x, &y0).unwrap();
        let d2 = host.dot(&x, &y0).unwrap();
        assert_eq!(d1.to_bits(), d2.to_bits(), "dot bits differ at n={n}");

        for kind in [
            Reduction::InfNorm,
            Reduction::OneNorm,
            Reduction::TwoNorm,
            Reduction::Min,
            Reduction::Max,
        ] {
            let r1 = reference.reduce(&x, kind).unwrap();
            let r2 = host.reduce(&x, kind).unwrap();
            assert_eq!(r1.to_bits(), r2.to_bits(), "reduce {kind:?} at n={n}");
        }

        let mut y1 = y0.clone();
        let mut y2 = y0.clone();
        reference.axpy(0.37, &x, &mut y1).unwrap();
        host.axpy(0.37, &x, &mut y2).unwrap();
        assert_eq!(y1, y2);

        let rows = n.div_ceil(3).max(1);
        let mut a = DenseMatrix::zeros(rows, n);
        for i in 0..rows {
            for j in 0..n {
                a.set(i, j, rng.uniform(-1.0, 1.0));
            }
        }
        let mut g1 = vec![0.1; rows];
        let mut g2 = vec![0.1; rows];
        reference.gemv(0.5, &mut g1, 1.3, &a, &x, false).unwrap();
        host.gemv(0.5, &mut g2, 1.3, &a, &x, false).unwrap();
        assert_eq!(g1, g2);
    }
}
