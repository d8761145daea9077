//! Dense row-elimination solve with partial pivoting, plus random matrix
//! helpers for the verification suites.

use mdsipm::rng::SplitMix64;
use mdsipm::DenseMatrix;

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot vanishes relative to the matrix scale.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(a.rows(), a.cols());
    assert_eq!(a.rows(), b.len());
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut x = b.to_vec();
    let scale = a.max_abs().max(1.0);

    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if m[i][k].abs() > m[piv][k].abs() {
                piv = i;
            }
        }
        if m[piv][k].abs() < 1e-14 * scale {
            return None;
        }
        m.swap(k, piv);
        x.swap(k, piv);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            if f != 0.0 {
                for j in k..n {
                    m[i][j] -= f * m[k][j];
                }
                x[i] -= f * x[k];
            }
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}

/// Random symmetric matrix with entries uniform in `[-1, 1]`.
pub fn random_symmetric(rng: &mut SplitMix64, n: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = rng.uniform(-1.0, 1.0);
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    a
}

/// Random nonsingular matrix: random entries plus a dominant diagonal.
pub fn random_nonsingular(rng: &mut SplitMix64, n: usize) -> DenseMatrix {
    let mut s = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s.set(i, j, rng.uniform(-1.0, 1.0));
        }
        s.add_at(i, i, n as f64);
    }
    s
}

/// `S^T A S` computed densely.
pub fn congruence(a: &DenseMatrix, s: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    let mut at = DenseMatrix::zeros(n, n);
    // at = A * S
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for t in 0..n {
                acc += a.get(i, t) * s.get(t, j);
            }
            at.set(i, j, acc);
        }
    }
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for t in 0..n {
                acc += s.get(t, i) * at.get(t, j);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Residual `max_i |A x - b|_i`.
pub fn residual_inf(a: &DenseMatrix, x: &[f64], b: &[f64]) -> f64 {
    let mut r = 0.0_f64;
    for i in 0..a.rows() {
        let mut s = 0.0;
        for (aij, &xj) in a.row(i).iter().zip(x) {
            s += aij * xj;
        }
        r = r.max((s - b[i]).abs());
    }
    r
}
