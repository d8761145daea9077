//! Dense symmetric-indefinite factorization `A = P L D Lᵀ Pᵀ` by the
//! Bunch-Kaufman diagonal pivoting method, with 1×1 and 2×2 pivots.
//!
//! `L` is unit lower triangular, `D` is block diagonal, and the matrix
//! inertia — the count of positive, zero and negative eigenvalues — is read
//! directly off the `D` blocks (Sylvester's law of inertia). The interior
//! point loop depends on that inertia to accept or re-regularize each KKT
//! factorization.
//!
//! The factorization is the classic unblocked column algorithm with partial
//! pivoting threshold `alpha = (1 + sqrt(17)) / 8`, working on the lower
//! triangle. Symmetric interchanges are applied to entire rows including the
//! already-computed multiplier columns, so a single permutation describes
//! the whole factorization.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::DenseMatrix;

/// Bunch-Kaufman pivoting threshold, `(1 + sqrt(17)) / 8`.
pub const BK_ALPHA: f64 = 0.640_388_203_202_207_6;

/// Eigenvalue sign counts of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub pos: usize,
    pub zero: usize,
    pub neg: usize,
}

impl Inertia {
    pub fn add(self, other: Inertia) -> Inertia {
        Inertia {
            pos: self.pos + other.pos,
            zero: self.zero + other.zero,
            neg: self.neg + other.neg,
        }
    }
}

/// One diagonal block of `D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PivotBlock {
    Single { index: usize, d: f64 },
    /// Symmetric 2×2 block `[[d11, d21], [d21, d22]]` starting at `index`.
    Pair {
        index: usize,
        d11: f64,
        d21: f64,
        d22: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("matrix is {rows}x{cols}, factorization requires square input")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({i},{j})")]
    NonFinite { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("right-hand side has {got} entries, factors are for dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("singular pivot block at index {index}")]
    SingularPivot { index: usize },
}

/// Factorization result: permutation, unit-lower factor, block-diagonal `D`.
#[derive(Clone, Debug)]
pub struct LdlFactors {
    n: usize,
    /// `perm[i]` is the original index of the row placed at position `i`,
    /// i.e. `(P^T A P)[i][j] = A[perm[i]][perm[j]] = (L D L^T)[i][j]`.
    perm: Vec<usize>,
    l: DenseMatrix,
    blocks: Vec<PivotBlock>,
    /// Infinity norm of the input, scale for the zero-pivot classification.
    anorm: f64,
}

/// Factorizes a symmetric matrix, reading only its lower triangle.
pub fn bk_factorize(a: &DenseMatrix) -> Result<LdlFactors, FactorError> {
    if a.rows() != a.cols() {
        return Err(FactorError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    for i in 0..n {
        for j in 0..=i {
            if !a.get(i, j).is_finite() {
                return Err(FactorError::NonFinite { i, j });
            }
        }
    }
    let anorm = a.inf_norm();

    // Working copy, row-major, lower triangle significant.
    let mut w: Vec<f64> = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            w[i * n + j] = a.get(i, j);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut blocks: Vec<PivotBlock> = Vec::new();

    let mut wk = vec![0.0; n];
    let mut wkp1 = vec![0.0; n];

    let mut k = 0;
    while k < n {
        let absakk = w[k * n + k].abs();
        let mut imax = k;
        let mut colmax = 0.0;
        for i in k + 1..n {
            let v = w[i * n + k].abs();
            if v > colmax {
                colmax = v;
                imax = i;
            }
        }

        if absakk.max(colmax) == 0.0 {
            // Entire active column is zero: a zero 1x1 pivot.
            blocks.push(PivotBlock::Single {
                index: k,
                d: w[k * n + k],
            });
            k += 1;
            continue;
        }

        let mut kstep = 1;
        let mut kp = k;
        if absakk < BK_ALPHA * colmax {
            // Largest off-diagonal of row/column imax in the active block.
            let mut rowmax = 0.0_f64;
            for j in k..imax {
                rowmax = rowmax.max(w[imax * n + j].abs());
            }
            for i in imax + 1..n {
                rowmax = rowmax.max(w[i * n + imax].abs());
            }
            if absakk * rowmax >= BK_ALPHA * colmax * colmax {
                // k-th diagonal still acceptable relative to the growth test.
            } else if w[imax * n + imax].abs() >= BK_ALPHA * rowmax {
                kp = imax;
            } else {
                kp = imax;
                kstep = 2;
            }
        }

        if kstep == 1 && kp != k {
            swap_sym(&mut w, n, k, kp);
            perm.swap(k, kp);
        } else if kstep == 2 && kp != k + 1 {
            swap_sym(&mut w, n, k + 1, kp);
            perm.swap(k + 1, kp);
        }

        if kstep == 1 {
            let d = w[k * n + k];
            blocks.push(PivotBlock::Single { index: k, d });
            if k + 1 < n && d != 0.0 {
                let dinv = 1.0 / d;
                for i in k + 1..n {
                    wk[i] = w[i * n + k] * dinv;
                }
                for i in k + 1..n {
                    let aik = w[i * n + k];
                    if aik != 0.0 {
                        let row = &mut w[i * n + k + 1..i * n + i + 1];
                        let mults = &wk[k + 1..i + 1];
                        for (rij, &m) in row.iter_mut().zip(mults) {
                            *rij -= aik * m;
                        }
                    }
                    w[i * n + k] = wk[i];
                }
            }
            k += 1;
        } else {
            let d11 = w[k * n + k];
            let d21 = w[(k + 1) * n + k];
            let d22 = w[(k + 1) * n + k + 1];
            blocks.push(PivotBlock::Pair {
                index: k,
                d11,
                d21,
                d22,
            });
            if k + 2 < n {
                // d21 != 0 by pivot selection; the 2x2 is indefinite.
                let e11 = d22 / d21;
                let e22 = d11 / d21;
                let t = 1.0 / (e11 * e22 - 1.0);
                let d21inv = t / d21;
                for i in k + 2..n {
                    wk[i] = d21inv * (e11 * w[i * n + k] - w[i * n + k + 1]);
                    wkp1[i] = d21inv * (e22 * w[i * n + k + 1] - w[i * n + k]);
                }
                for i in k + 2..n {
                    let aik = w[i * n + k];
                    let aik1 = w[i * n + k + 1];
                    let row = &mut w[i * n + k + 2..i * n + i + 1];
                    let m1 = &wk[k + 2..i + 1];
                    let m2 = &wkp1[k + 2..i + 1];
                    for ((rij, &u), &v) in row.iter_mut().zip(m1).zip(m2) {
                        *rij -= aik * u + aik1 * v;
                    }
                    w[i * n + k] = wk[i];
                    w[i * n + k + 1] = wkp1[i];
                }
            }
            k += 2;
        }
    }

    // Rewrite the working buffer in place as the unit-lower factor: unit
    // diagonal, zero upper triangle, zero sub-diagonal inside 2x2 pivots.
    for i in 0..n {
        w[i * n + i] = 1.0;
        for j in i + 1..n {
            w[i * n + j] = 0.0;
        }
    }
    for b in &blocks {
        if let PivotBlock::Pair { index, .. } = b {
            w[(index + 1) * n + index] = 0.0;
        }
    }

    Ok(LdlFactors {
        n,
        perm,
        l: DenseMatrix::from_row_major(n, n, w),
        blocks,
        anorm,
    })
}

/// Symmetric row/column interchange `r1 <-> r2` (`r1 < r2`) in row-major
/// lower storage, covering all columns so the permutation stays global.
fn swap_sym(w: &mut [f64], n: usize, r1: usize, r2: usize) {
    debug_assert!(r1 < r2);
    for j in 0..r1 {
        w.swap(r1 * n + j, r2 * n + j);
    }
    for i in r1 + 1..r2 {
        w.swap(i * n + r1, r2 * n + i);
    }
    for i in r2 + 1..n {
        w.swap(i * n + r1, i * n + r2);
    }
    w.swap(r1 * n + r1, r2 * n + r2);
}

impl LdlFactors {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn unit_lower(&self) -> &DenseMatrix {
        &self.l
    }

    pub fn blocks(&self) -> &[PivotBlock] {
        &self.blocks
    }

    pub fn inf_norm_of_input(&self) -> f64 {
        self.anorm
    }

    /// Scale-relative threshold below which a 1x1 pivot counts as zero.
    pub fn zero_tol(&self) -> f64 {
        self.n as f64 * f64::EPSILON * self.anorm
    }

    /// Inertia of the factorized matrix, read off the `D` blocks.
    pub fn inertia(&self) -> Inertia {
        let ztol = self.zero_tol();
        let mut out = Inertia {
            pos: 0,
            zero: 0,
            neg: 0,
        };
        for b in &self.blocks {
            match *b {
                PivotBlock::Single { d, .. } => {
                    if d == 0.0 || d.abs() < ztol {
                        out.zero += 1;
                    } else if d > 0.0 {
                        out.pos += 1;
                    } else {
                        out.neg += 1;
                    }
                }
                PivotBlock::Pair { d11, d21, d22, .. } => {
                    let det = d11 * d22 - d21 * d21;
                    let trace = d11 + d22;
                    if det < 0.0 {
                        // The canonical case: Bunch-Kaufman 2x2 pivots are
                        // indefinite by construction.
                        out.pos += 1;
                        out.neg += 1;
                    } else if det > 0.0 {
                        if trace > 0.0 {
                            out.pos += 2;
                        } else {
                            out.neg += 2;
                        }
                    } else {
                        out.zero += 1;
                        if trace > 0.0 {
                            out.pos += 1;
                        } else if trace < 0.0 {
                            out.neg += 1;
                        } else {
                            out.zero += 1;
                        }
                    }
                }
            }
        }
        out
    }

    /// Solves `A x = b` using the factors.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, SolveError> {
        let n = self.n;
        if b.len() != n {
            return Err(SolveError::Dimension {
                expected: n,
                got: b.len(),
            });
        }
        let ztol = self.zero_tol();

        // Permute: u = P^T b.
        let mut u: Vec<f64> = (0..n).map(|i| b[self.perm[i]]).collect();

        // Forward: L w = u (unit diagonal).
        for i in 0..n {
            let row = self.l.row(i);
            let mut s = u[i];
            for j in 0..i {
                s -= row[j] * u[j];
            }
            u[i] = s;
        }

        // Block diagonal: D t = w.
        for blk in &self.blocks {
            match *blk {
                PivotBlock::Single { index, d } => {
                    if d == 0.0 || d.abs() < ztol {
                        return Err(SolveError::SingularPivot { index });
                    }
                    u[index] /= d;
                }
                PivotBlock::Pair {
                    index,
                    d11,
                    d21,
                    d22,
                } => {
                    let det = d11 * d22 - d21 * d21;
                    if det == 0.0 {
                        return Err(SolveError::SingularPivot { index });
                    }
                    let (b1, b2) = (u[index], u[index + 1]);
                    u[index] = (d22 * b1 - d21 * b2) / det;
                    u[index + 1] = (d11 * b2 - d21 * b1) / det;
                }
            }
        }

        // Backward: L^T v = t.
        for i in (0..n).rev() {
            let mut s = u[i];
            for j in i + 1..n {
                s -= self.l.get(j, i) * u[j];
            }
            u[i] = s;
        }

        // Un-permute: x = P u.
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[self.perm[i]] = u[i];
        }
        Ok(x)
    }

    /// Reassembles `P L D Lᵀ Pᵀ`. Test and debugging aid, O(n³).
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.n;
        // LD = L * D, applying the block diagonal column-wise.
        let mut ld = self.l.clone();
        for blk in &self.blocks {
            match *blk {
                PivotBlock::Single { index, d } => {
                    for i in 0..n {
                        let v = ld.get(i, index) * d;
                        ld.set(i, index, v);
                    }
                }
                PivotBlock::Pair {
                    index,
                    d11,
                    d21,
                    d22,
                } => {
                    for i in 0..n {
                        let (c1, c2) = (ld.get(i, index), ld.get(i, index + 1));
                        ld.set(i, index, c1 * d11 + c2 * d21);
                        ld.set(i, index + 1, c1 * d21 + c2 * d22);
                    }
                }
            }
        }
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for t in 0..n {
                    s += ld.get(i, t) * self.l.get(j, t);
                }
                out.set(self.perm[i], self.perm[j], s);
            }
        }
        out
    }
}

/// Spec-named wrapper around [`LdlFactors::solve`].
pub fn ldl_solve(factors: &LdlFactors, b: &[f64]) -> Result<Vec<f64>, SolveError> {
    factors.solve(b)
}

/// Spec-named wrapper around [`LdlFactors::inertia`].
pub fn ldl_inertia(factors: &LdlFactors) -> Inertia {
    factors.inertia()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn inertia_of(m: &DenseMatrix) -> Inertia {
        bk_factorize(m).unwrap().inertia()
    }

    #[test]
    fn identity_factors_trivially() {
        let a = DenseMatrix::identity(3);
        let f = bk_factorize(&a).unwrap();
        assert_eq!(f.perm(), &[0, 1, 2]);
        assert_eq!(f.unit_lower(), &DenseMatrix::identity(3));
        assert_eq!(
            f.blocks(),
            &[
                PivotBlock::Single { index: 0, d: 1.0 },
                PivotBlock::Single { index: 1, d: 1.0 },
                PivotBlock::Single { index: 2, d: 1.0 },
            ]
        );
        assert_eq!(
            f.inertia(),
            Inertia {
                pos: 3,
                zero: 0,
                neg: 0
            }
        );
    }

    #[test]
    fn negative_diagonal() {
        let a = DenseMatrix::from_rows(&[&[-1.0, 0.0], &[0.0, -2.0]]);
        let f = bk_factorize(&a).unwrap();
        assert_eq!(
            f.blocks(),
            &[
                PivotBlock::Single { index: 0, d: -1.0 },
                PivotBlock::Single { index: 1, d: -2.0 },
            ]
        );
        assert_eq!(
            f.inertia(),
            Inertia {
                pos: 0,
                zero: 0,
                neg: 2
            }
        );
    }

    #[test]
    fn zero_diagonal_forces_2x2_pivot() {
        let a = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let f = bk_factorize(&a).unwrap();
        assert_eq!(f.blocks().len(), 1);
        match f.blocks()[0] {
            PivotBlock::Pair { d11, d21, d22, .. } => {
                assert_eq!(d11 * d22 - d21 * d21, -1.0);
            }
            _ => panic!("expected a 2x2 pivot"),
        }
        // eigenvalues are +-1
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
    fn inertia_counts_zero_pivots() {
        let a = DenseMatrix::from_rows(&[
            &[1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0],
            &[0.0, 0.0, -4.0],
        ]);
        assert_eq!(
            inertia_of(&a),
            Inertia {
                pos: 1,
                zero: 1,
                neg: 1
            }
        );
    }

    #[test]
    fn solve_diagonal() {
        let a = DenseMatrix::from_rows(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let f = bk_factorize(&a).unwrap();
        let x = f.solve(&[2.0, 8.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let f = bk_factorize(&DenseMatrix::identity(4)).unwrap();
        let b = [3.0, -1.0, 0.5, 9.0];
        assert_eq!(f.solve(&b).unwrap(), b.to_vec());
    }

    #[test]
    fn singular_solve_reports_pivot() {
        let a = DenseMatrix::zeros(2, 2);
        let f = bk_factorize(&a).unwrap();
        assert!(matches!(
            f.solve(&[1.0, 1.0]),
            Err(SolveError::SingularPivot { .. })
        ));
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        let a = DenseMatrix::zeros(2, 3);
        assert!(matches!(
            bk_factorize(&a),
            Err(FactorError::NotSquare { rows: 2, cols: 3 })
        ));
        let mut b = DenseMatrix::zeros(2, 2);
        b.set(1, 0, f64::NAN);
        assert!(matches!(
            bk_factorize(&b),
            Err(FactorError::NonFinite { i: 1, j: 0 })
        ));
    }

    #[test]
    fn reconstruct_small_indefinite() {
        let a = DenseMatrix::from_rows(&[
            &[1.0, 4.0, -2.0],
            &[4.0, 0.5, 3.0],
            &[-2.0, 3.0, -1.5],
        ]);
        let f = bk_factorize(&a).unwrap();
        let r = f.reconstruct();
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (r.get(i, j) - a.get(i, j)).abs() < 1e-12,
                    "mismatch at ({i},{j}): {} vs {}",
                    r.get(i, j),
                    a.get(i, j)
                );
            }
        }
    }
}
