//! Property tests of the kernel suite: fused sandwich versus dense
//! materialization, triplet products versus densified gemv, and the
//! fraction-to-boundary step rule.

use mdsipm::linalg::{BackendSelector, Reduction};
use mdsipm::{is_finite_bound, make_linear_algebra, DenseMatrix, TripletMatrix};
use proptest::prelude::*;

fn triplet_strategy(
    max_rows: usize,
    max_cols: usize,
) -> impl Strategy<Value = TripletMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        // entry count up to 2*r*c allows duplicate coordinates
        proptest::collection::vec((0..r, 0..c, -10.0..10.0f64), 0..=(2 * r * c).min(120))
            .prop_map(move |entries| TripletMatrix::from_entries(r, c, &entries))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn fused_sandwich_equals_dense_materialization(
        seed_a in triplet_strategy(20, 15),
        sign in prop_oneof![Just(1.0), Just(-1.0)],
        dvals in proptest::collection::vec(-5.0..5.0f64, 15),
    ) {
        let a = seed_a;
        // reuse a's shape for b so the sandwich is square-free but valid
        let b = TripletMatrix::from_entries(
            a.cols().min(12) + 1,
            a.cols(),
            &a.iter()
                .map(|(i, j, v)| (i % (a.cols().min(12) + 1), j, v * 0.5 + 0.25))
                .collect::<Vec<_>>(),
        );
        let d = &dvals[..a.cols()];

        let k = make_linear_algebra(BackendSelector::default()).unwrap();
        let mut m = DenseMatrix::zeros(a.rows(), b.rows());
        k.fused_add_sdst(&mut m, &a, d, &b, sign).unwrap();

        // dense materialization: A * diag(d) * B^T computed explicitly
        let ad = a.to_dense().unwrap();
        let bd = b.to_dense().unwrap();
        let mut expect = DenseMatrix::zeros(a.rows(), b.rows());
        for i in 0..a.rows() {
            for j in 0..b.rows() {
                let mut s = 0.0;
                for t in 0..a.cols() {
                    s += ad.get(i, t) * d[t] * bd.get(j, t);
                }
                expect.set(i, j, sign * s);
            }
        }
        let scale = expect.max_abs().max(1.0);
        for i in 0..a.rows() {
            for j in 0..b.rows() {
                prop_assert!(
                    (m.get(i, j) - expect.get(i, j)).abs() <= 1e-13 * scale,
                    "entry ({},{}): {} vs {}", i, j, m.get(i, j), expect.get(i, j)
                );
            }
        }
    }

    #[test]
    fn triplet_product_agrees_with_densified_gemv(
        a in triplet_strategy(25, 25),
        transpose in any::<bool>(),
        xs in proptest::collection::vec(-10.0..10.0f64, 25),
    ) {
        let k = make_linear_algebra(BackendSelector::default()).unwrap();
        let (out_len, in_len) = if transpose { (a.cols(), a.rows()) } else { (a.rows(), a.cols()) };
        let x = &xs[..in_len];

        let mut y1 = vec![0.25; out_len];
        k.triplet_times_vec(0.5, &mut y1, 2.0, &a, x, transpose).unwrap();

        let dense = a.to_dense().unwrap();
        let mut y2 = vec![0.25; out_len];
        k.gemv(0.5, &mut y2, 2.0, &dense, x, transpose).unwrap();

        for i in 0..out_len {
            prop_assert!(
                (y1[i] - y2[i]).abs() <= 1e-12 * (1.0 + y2[i].abs()),
                "entry {}: {} vs {}", i, y1[i], y2[i]
            );
        }
    }

    #[test]
    fn max_step_keeps_interior_and_is_maximal(
        raw in proptest::collection::vec(
            (0.01..0.99f64, -3.0..3.0f64, prop_oneof![Just(true), Just(false)], prop_oneof![Just(true), Just(false)]),
            1..12,
        ),
        tau in 0.5..0.995f64,
    ) {
        let inf = mdsipm::INFINITY_SENTINEL;
        let n = raw.len();
        let mut x = vec![0.0; n];
        let mut dx = vec![0.0; n];
        let mut lo = vec![0.0; n];
        let mut up = vec![0.0; n];
        for (i, &(frac, d, lo_fin, up_fin)) in raw.iter().enumerate() {
            lo[i] = if lo_fin { -1.0 } else { -inf };
            up[i] = if up_fin { 2.0 } else { inf };
            // strictly interior w.r.t. whatever is finite
            x[i] = -1.0 + 3.0 * frac;
            if !lo_fin && !up_fin { x[i] = 10.0 * (frac - 0.5); }
            dx[i] = d;
        }
        let k = make_linear_algebra(BackendSelector::default()).unwrap();
        let alpha = k.max_step_to_bound(&x, &dx, &lo, &up, tau).unwrap();
        prop_assert!(alpha > 0.0 && alpha <= 1.0);

        // the accepted step stays strictly interior
        for i in 0..n {
            let xi = x[i] + alpha * dx[i];
            if is_finite_bound(lo[i]) { prop_assert!(xi > lo[i], "component {} hit lower bound", i); }
            if is_finite_bound(up[i]) { prop_assert!(xi < up[i], "component {} hit upper bound", i); }
        }

        // maximality: a slightly larger step violates the tau rule somewhere
        if alpha < 1.0 {
            let bigger = alpha * (1.0 + 1e-12);
            let violated = (0..n).any(|i| {
                if dx[i] > 0.0 && is_finite_bound(up[i]) {
                    bigger * dx[i] > tau * (up[i] - x[i]) * (1.0 - 1e-15)
                } else if dx[i] < 0.0 && is_finite_bound(lo[i]) {
                    bigger * -dx[i] > tau * (x[i] - lo[i]) * (1.0 - 1e-15)
                } else {
                    false
                }
            });
            prop_assert!(violated, "step {} was not maximal", alpha);
        }
    }

    #[test]
    fn reductions_match_naive(xs in proptest::collection::vec(-100.0..100.0f64, 1..50)) {
        let k = make_linear_algebra(BackendSelector::default()).unwrap();
        let inf = k.reduce(&xs, Reduction::InfNorm).unwrap();
        let one = k.reduce(&xs, Reduction::OneNorm).unwrap();
        let two = k.reduce(&xs, Reduction::TwoNorm).unwrap();
        let naive_inf = xs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let naive_one: f64 = xs.iter().map(|v| v.abs()).sum();
        let naive_two = xs.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert_eq!(inf, naive_inf);
        prop_assert!((one - naive_one).abs() <= 1e-12 * (1.0 + naive_one));
        prop_assert!((two - naive_two).abs() <= 1e-12 * (1.0 + naive_two));
    }
}
