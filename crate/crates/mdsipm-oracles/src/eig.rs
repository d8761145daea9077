//! Eigenvalue sign counting for symmetric matrices, independent of any
//! factorization under test: Householder reduction to tridiagonal form
//! followed by Sturm-sequence counts.

use mdsipm::DenseMatrix;

/// Counts of eigenvalues above, within, and below a symmetric tolerance
/// band around zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignCounts {
    pub pos: usize,
    pub zero: usize,
    pub neg: usize,
}

/// Reduces a symmetric matrix (full storage) to tridiagonal form by
/// Householder similarity transforms; returns `(diag, offdiag)`.
pub fn tridiagonalize(a: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.rows(), a.cols(), "tridiagonalize needs a square matrix");
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();

    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the diagonal.
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += m[i][k] * m[i][k];
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = m[k + 1][k];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; n];
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = m[i][k];
        }
        let beta: f64 = (k + 1..n).map(|i| v[i] * v[i]).sum();
        if beta == 0.0 {
            continue;
        }

        // p = (2/beta) A v, w = p - (v'p / beta) v, A <- A - v w' - w v'
        let mut p = vec![0.0; n];
        for i in k + 1..n {
            let mut s = 0.0;
            for j in k + 1..n {
                s += m[i][j] * v[j];
            }
            p[i] = 2.0 * s / beta;
        }
        let vp: f64 = (k + 1..n).map(|i| v[i] * p[i]).sum();
        let kappa = vp / beta;
        for i in k + 1..n {
            p[i] -= kappa * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] -= v[i] * p[j] + p[i] * v[j];
            }
        }
        m[k + 1][k] = alpha;
        m[k][k + 1] = alpha;
        for i in k + 2..n {
            m[i][k] = 0.0;
            m[k][i] = 0.0;
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m[i + 1][i]).collect();
    (diag, off)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `sigma`,
/// by the classic Sturm/LDLᵀ sign-agreement count.
pub fn count_below(diag: &[f64], off: &[f64], sigma: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let max_off2 = off.iter().map(|e| e * e).fold(1.0_f64, f64::max);
    let pivmin = f64::MIN_POSITIVE * max_off2;

    let mut count = 0;
    let mut q = diag[0] - sigma;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        if q.abs() < pivmin {
            q = -pivmin;
        }
        q = (diag[i] - sigma) - off[i - 1] * off[i - 1] / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalue sign counts of a symmetric matrix: eigenvalues in
/// `(-zero_tol, zero_tol)` count as zero.
pub fn sign_counts(a: &DenseMatrix, zero_tol: f64) -> SignCounts {
    let n = a.rows();
    let (diag, off) = tridiagonalize(a);
    let neg = count_below(&diag, &off, -zero_tol);
    let below_pos = count_below(&diag, &off, zero_tol);
    SignCounts {
        pos: n - below_pos,
        zero: below_pos - neg,
        neg,
    }
}

/// True when no eigenvalue magnitude falls below `margin`.
pub fn eigenvalues_bounded_away(a: &DenseMatrix, margin: f64) -> bool {
    sign_counts(a, margin).zero == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_counts() {
        let a = DenseMatrix::from_rows(&[
            &[3.0, 0.0, 0.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 2.0],
        ]);
        let c = sign_counts(&a, 1e-12);
        assert_eq!(
            c,
            SignCounts {
                pos: 2,
                zero: 1,
                neg: 1
            }
        );
    }

    #[test]
    fn two_by_two_exchange() {
        // eigenvalues +-1
        let a = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let c = sign_counts(&a, 1e-12);
        assert_eq!(
            c,
            SignCounts {
                pos: 1,
                zero: 0,
                neg: 1
            }
        );
    }

    #[test]
    fn known_spectrum_3x3() {
        // A = Q diag(2, -3, 5) Q^T for a Householder reflector Q; eigenvalues
        // survive the similarity exactly in count.
        let q = {
            // reflector from v = (1,1,1)
            let mut m = DenseMatrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    m.set(i, j, id - 2.0 / 3.0);
                }
            }
            m
        };
        let lam = [2.0, -3.0, 5.0];
        let mut a = DenseMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for t in 0..3 {
                    s += q.get(i, t) * lam[t] * q.get(j, t);
                }
                a.set(i, j, s);
            }
        }
        let c = sign_counts(&a, 1e-10);
        assert_eq!(
            c,
            SignCounts {
                pos: 2,
                zero: 0,
                neg: 1
            }
        );
        // count_below at a shift between eigenvalues
        let (d, e) = tridiagonalize(&a);
        assert_eq!(count_below(&d, &e, 3.0), 2);
        assert_eq!(count_below(&d, &e, -10.0), 0);
        assert_eq!(count_below(&d, &e, 10.0), 3);
    }
}
