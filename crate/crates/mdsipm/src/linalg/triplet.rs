use alloc::vec::Vec;

use super::{DenseMatrix, LinAlgError};

/// Sparse matrix in coordinate (triplet) format.
///
/// Entry order is arbitrary but stable; duplicate `(i, j)` coordinates are
/// permitted and their values sum when the matrix is applied.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TripletMatrix {
    rows: usize,
    cols: usize,
    i: Vec<usize>,
    j: Vec<usize>,
    v: Vec<f64>,
}

impl TripletMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            i: Vec::new(),
            j: Vec::new(),
            v: Vec::new(),
        }
    }

    pub fn with_capacity(rows: usize, cols: usize, nnz: usize) -> Self {
        Self {
            rows,
            cols,
            i: Vec::with_capacity(nnz),
            j: Vec::with_capacity(nnz),
            v: Vec::with_capacity(nnz),
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut m = Self::with_capacity(rows, cols, entries.len());
        for &(i, j, v) in entries {
            m.push(i, j, v);
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::with_capacity(n, n, n);
        for k in 0..n {
            m.push(k, k, 1.0);
        }
        m
    }

    /// Appends an entry. Indices are validated when the matrix is applied.
    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        self.i.push(i);
        self.j.push(j);
        self.v.push(v);
    }

    pub fn clear(&mut self) {
        self.i.clear();
        self.j.clear();
        self.v.clear();
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.v.len()
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.i
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.j
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.v
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nnz()).map(move |k| (self.i[k], self.j[k], self.v[k]))
    }

    /// Index of the first out-of-range entry, if any.
    pub fn first_bad_entry(&self) -> Option<usize> {
        (0..self.nnz()).find(|&k| self.i[k] >= self.rows || self.j[k] >= self.cols)
    }

    pub(crate) fn malformed(&self, k: usize) -> LinAlgError {
        LinAlgError::MalformedMatrix {
            entry: k,
            i: self.i[k],
            j: self.j[k],
            rows: self.rows,
            cols: self.cols,
        }
    }

    /// Densifies, summing duplicates.
    pub fn to_dense(&self) -> Result<DenseMatrix, LinAlgError> {
        if let Some(k) = self.first_bad_entry() {
            return Err(self.malformed(k));
        }
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m.add_at(i, j, v);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_sum_on_densify() {
        let t = TripletMatrix::from_entries(2, 2, &[(0, 1, 2.0), (0, 1, 3.0), (1, 0, 1.0)]);
        let d = t.to_dense().unwrap();
        assert_eq!(d.get(0, 1), 5.0);
        assert_eq!(d.get(1, 0), 1.0);
        assert_eq!(d.get(0, 0), 0.0);
    }

    #[test]
    fn out_of_range_detected() {
        let t = TripletMatrix::from_entries(2, 2, &[(0, 0, 1.0), (2, 0, 1.0)]);
        assert_eq!(t.first_bad_entry(), Some(1));
        assert!(t.to_dense().is_err());
    }
}
