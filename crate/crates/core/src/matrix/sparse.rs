use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Per-component tolerance of the conjugate-symmetry check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// One stored nonzero, 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
}

/// How a triplet list encodes the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Storage {
    /// Every nonzero is listed explicitly; mirrors must be present.
    General,
    /// Missing mirror entries are completed with the conjugate value.
    Symmetric,
}

/// Validated sparse Hermitian matrix with its sparsity metadata.
///
/// Entries are kept in row-major order with exact zeros dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitianMatrix {
    dim: usize,
    entries: Vec<Entry>,
    sparsity: usize,
    max_entry_modulus: f64,
}

fn conj_close(a: Complex64, b: Complex64) -> bool {
    (a.re - b.re).abs() <= HERMITIAN_TOL && (a.im + b.im).abs() <= HERMITIAN_TOL
}

impl SparseHermitianMatrix {
    pub fn from_triplets<I>(dim: usize, triplets: I, storage: Storage) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        if dim == 0 {
            return Err(Error::Dimension("matrix dimension must be positive".into()));
        }
        let mut map: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (row, col, value) in triplets {
            if row >= dim || col >= dim {
                return Err(Error::Dimension(format!("entry ({row}, {col}) outside a {dim}x{dim} matrix")));
            }
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::Domain(format!("non-finite entry at ({row}, {col})")));
            }
            if map.insert((row, col), value).is_some() {
                return Err(Error::Domain(format!("duplicate entry ({row}, {col})")));
            }
        }
        map.retain(|_, v| *v != Complex64::new(0.0, 0.0));

        if storage == Storage::Symmetric {
            let missing: Vec<_> = map
                .iter()
                .filter(|(&(r, c), _)| r != c && !map.contains_key(&(c, r)))
                .map(|(&(r, c), v)| ((c, r), v.conj()))
                .collect();
            map.extend(missing);
        }

        for (&(r, c), &v) in &map {
            let mirror = map.get(&(c, r)).copied().unwrap_or_default();
            if !conj_close(v, mirror) {
                return Err(Error::NotHermitian { row: r, col: c });
            }
        }

        let entries: Vec<Entry> = map.into_iter().map(|((row, col), value)| Entry { row, col, value }).collect();
        Ok(Self::from_sorted_entries(dim, entries))
    }

    /// Builds from a dense Hermitian matrix, dropping exact zeros.
    pub fn from_dense(a: &DMatrix<Complex64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::Dimension(format!("{}x{} is not square", a.nrows(), a.ncols())));
        }
        let n = a.nrows();
        let triplets = (0..n).flat_map(|i| (0..n).map(move |j| (i, j, a[(i, j)])));
        Self::from_triplets(n, triplets, Storage::General)
    }

    /// Diagonal matrix with the given real entries.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let triplets = values.iter().enumerate().map(|(i, &v)| (i, i, Complex64::new(v, 0.0)));
        Self::from_triplets(values.len(), triplets, Storage::General)
    }

    fn from_sorted_entries(dim: usize, entries: Vec<Entry>) -> Self {
        let mut row_counts = vec![0usize; dim];
        let mut col_counts = vec![0usize; dim];
        let mut max_entry_modulus = 0.0f64;
        for e in &entries {
            row_counts[e.row] += 1;
            col_counts[e.col] += 1;
            max_entry_modulus = max_entry_modulus.max(e.value.norm());
        }
        let sparsity = row_counts.iter().chain(&col_counts).copied().max().unwrap_or(0);
        Self { dim, entries, sparsity, max_entry_modulus }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Maximum number of nonzeros in any row or column.
    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    /// `max |A_ij|` over stored entries.
    pub fn max_entry_modulus(&self) -> f64 {
        self.max_entry_modulus
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .binary_search_by(|e| (e.row, e.col).cmp(&(row, col)))
            .map(|i| self.entries[i].value)
            .unwrap_or_default()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.value.im == 0.0)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut a = DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            a[(e.row, e.col)] = e.value;
        }
        a
    }

    /// Real part as a dense matrix; exact when [`is_real`](Self::is_real).
    pub fn to_dense_real(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            a[(e.row, e.col)] = e.value.re;
        }
        a
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "vector length must match matrix dimension");
        let mut y = vec![Complex64::default(); self.dim];
        for e in &self.entries {
            y[e.row] += e.value * x[e.col];
        }
        y
    }

    /// `c * A` for a positive real `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let entries = self.entries.iter().map(|e| Entry { value: e.value * c, ..*e }).collect();
        Self::from_sorted_entries(self.dim, entries)
    }

    /// Entries as a triplet list, suitable for reloading with [`Storage::General`].
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|e| (e.row, e.col, e.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_metadata() {
        let a = SparseHermitianMatrix::diagonal(&[0.5, 0.25]).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.sparsity(), 1);
        assert_eq!(a.max_entry_modulus(), 0.5);
    }

    #[test]
    fn symmetric_storage_completes_conjugate() {
        let a = SparseHermitianMatrix::from_triplets(2, [(0, 1, c(0.1, 0.2))], Storage::Symmetric).unwrap();
        assert_eq!(a.entries().len(), 2);
        assert_eq!(a.get(1, 0), c(0.1, -0.2));
        assert_eq!(a.sparsity(), 1);
        let b = SparseHermitianMatrix::from_triplets(
            2,
            [(0, 0, c(1.0, 0.0)), (1, 1, c(1.0, 0.0)), (0, 1, c(0.1, 0.2))],
            Storage::Symmetric,
        )
        .unwrap();
        assert_eq!(b.sparsity(), 2);
    }

    #[test]
    fn general_storage_requires_mirror() {
        let err = SparseHermitianMatrix::from_triplets(2, [(0, 1, c(0.1, 0.0))], Storage::General).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn mismatched_mirror_is_rejected() {
        let err =
            SparseHermitianMatrix::from_triplets(2, [(0, 1, c(0.1, 0.2)), (1, 0, c(0.1, 0.2))], Storage::Symmetric)
                .unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn complex_diagonal_is_rejected() {
        let err = SparseHermitianMatrix::from_triplets(1, [(0, 0, c(1.0, 0.5))], Storage::General).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { row: 0, col: 0 }));
    }

    #[test]
    fn mirror_within_tolerance_is_accepted() {
        let a = SparseHermitianMatrix::from_triplets(
            2,
            [(0, 1, c(0.3, 0.1)), (1, 0, c(0.3 + 5e-13, -0.1 + 5e-13))],
            Storage::General,
        );
        assert!(a.is_ok());
    }

    #[test]
    fn out_of_range_index() {
        let err = SparseHermitianMatrix::from_triplets(2, [(2, 0, c(1.0, 0.0))], Storage::General).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn explicit_zeros_do_not_count_towards_sparsity() {
        let a = SparseHermitianMatrix::from_triplets(
            2,
            [(0, 0, c(1.0, 0.0)), (0, 1, c(0.0, 0.0)), (1, 1, c(2.0, 0.0))],
            Storage::Symmetric,
        )
        .unwrap();
        assert_eq!(a.sparsity(), 1);
    }

    #[test]
    fn mul_vec_matches_dense() {
        let a = SparseHermitianMatrix::from_triplets(
            3,
            [(0, 0, c(2.0, 0.0)), (1, 0, c(0.5, -0.5)), (2, 2, c(1.0, 0.0))],
            Storage::Symmetric,
        )
        .unwrap();
        let x = vec![c(1.0, 1.0), c(-2.0, 0.5), c(0.25, 0.0)];
        let y = a.mul_vec(&x);
        let dense = a.to_dense() * nalgebra::DVector::from_vec(x);
        for i in 0..3 {
            assert!((y[i] - dense[i]).norm() < 1e-15);
        }
    }
}
