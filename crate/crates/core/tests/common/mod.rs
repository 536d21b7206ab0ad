#![allow(dead_code)]

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use qspectral::matrix::{to_matrix_market, SparseHermitianMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-ish random unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, real: bool, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(gaussian(rng), if real { 0.0 } else { gaussian(rng) }));
    g.qr().q()
}

/// `Q diag(eigs) Q†`, made exactly Hermitian.
pub fn hermitian_with_spectrum<R: Rng>(eigs: &[f64], real: bool, rng: &mut R) -> SparseHermitianMatrix {
    let n = eigs.len();
    let q = random_unitary(n, real, rng);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, eigs.iter().map(|&x| Complex64::new(x, 0.0))));
    let a = &q * d * q.adjoint();
    let a = (&a + a.adjoint()).map(|z| z * 0.5);
    SparseHermitianMatrix::from_dense(&a).unwrap()
}

/// `n` eigenvalues spread log-uniformly over `[1, κ]`, both ends included.
pub fn log_uniform_spectrum<R: Rng>(n: usize, kappa: f64, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| kappa.powf(rng.random::<f64>())).collect();
    v[0] = 1.0;
    if n > 1 {
        v[1] = kappa;
    }
    v
}

pub fn write_matrix(dir: &Path, name: &str, a: &SparseHermitianMatrix) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, to_matrix_market(a)).unwrap();
    path
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}
