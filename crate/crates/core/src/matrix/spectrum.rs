//! Dense spectrum oracle, rescaling into `[1/(2κ), 1/2]`, and spectral statistics.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::sparse::SparseHermitianMatrix;
use crate::error::{Error, Result};

/// Largest dimension handled by the dense eigendecomposition oracle.
pub const DEFAULT_DENSE_CAP: usize = 4096;
/// Largest eigenvalue after rescaling.
pub const LAMBDA_MAX: f64 = 0.5;
/// Multiplier applied to a power-iteration estimate of the top eigenvalue.
pub const POWER_SAFETY: f64 = 1.01;
/// Relative stopping tolerance of the power iteration.
pub const POWER_TOL: f64 = 1e-6;

const BOUND_SLACK: f64 = 1e-10;

/// Eigenvalues (ascending) and eigenvectors (as columns) of a Hermitian matrix.
pub struct DenseEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

fn check_cap(a: &SparseHermitianMatrix, cap: usize) -> Result<()> {
    if a.dim() > cap {
        return Err(Error::TooLarge(format!("dimension {} exceeds dense cap {cap}", a.dim())));
    }
    Ok(())
}

/// Sorted eigenvalues by dense decomposition.
pub fn dense_eigenvalues(a: &SparseHermitianMatrix, cap: usize) -> Result<Vec<f64>> {
    check_cap(a, cap)?;
    let mut ev: Vec<f64> = if a.is_real() {
        a.to_dense_real().symmetric_eigenvalues().iter().copied().collect()
    } else {
        a.to_dense().symmetric_eigenvalues().iter().copied().collect()
    };
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Full dense eigendecomposition, eigenpairs sorted by eigenvalue.
pub fn dense_eigen(a: &SparseHermitianMatrix, cap: usize) -> Result<DenseEigen> {
    check_cap(a, cap)?;
    let eig = SymmetricEigen::new(a.to_dense());
    let mut order: Vec<usize> = (0..a.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(a.dim(), a.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(DenseEigen { eigenvalues, eigenvectors })
}

/// Exact eigenvalues together with the log-spectrum statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumInfo {
    pub eigenvalues: Vec<f64>,
    /// `Σ log λ_j`, the log-determinant.
    pub alpha: f64,
    /// Mean of `log λ_j`.
    pub mu: f64,
    /// Population standard deviation of `log λ_j`.
    pub delta: f64,
    pub kappa_actual: f64,
}

impl SpectrumInfo {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Dimension("empty spectrum".into()));
        }
        eigenvalues.sort_by(f64::total_cmp);
        let lo = eigenvalues[0];
        if !(lo > 0.0) {
            return Err(Error::NotPositive(lo));
        }
        let hi = eigenvalues[eigenvalues.len() - 1];
        let n = eigenvalues.len() as f64;
        let logs: Vec<f64> = eigenvalues.iter().map(|x| x.ln()).collect();
        let mu = crate::scalar::pairwise_sum(&logs) / n;
        let sq: Vec<f64> = logs.iter().map(|l| (l - mu) * (l - mu)).collect();
        let delta = (crate::scalar::pairwise_sum(&sq) / n).sqrt();
        Ok(Self { alpha: n * mu, mu, delta, kappa_actual: hi / lo, eigenvalues })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Where a spectral bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Supplied,
    Oracle,
    PowerIteration,
}

/// Caller-supplied eigenvalue bounds for the unscaled matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpectralBounds {
    /// Upper bound on the largest eigenvalue; power iteration when absent.
    pub lambda_max: Option<f64>,
    /// Lower bound on the smallest eigenvalue; dense oracle when absent.
    pub lambda_min: Option<f64>,
}

impl SpectralBounds {
    /// Both bounds taken from the dense oracle.
    pub fn oracle(a: &SparseHermitianMatrix) -> Result<Self> {
        let ev = dense_eigenvalues(a, DEFAULT_DENSE_CAP)?;
        Ok(Self { lambda_max: Some(ev[ev.len() - 1]), lambda_min: Some(ev[0]) })
    }
}

/// A positive matrix rescaled so its spectrum lies in `[1/(2κ), 1/2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaledMatrix {
    #[serde(skip)]
    pub matrix: SparseHermitianMatrix,
    /// `c` with `matrix = c · A`.
    pub scale: f64,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub kappa_bound: f64,
    pub lambda_max_source: BoundSource,
    pub lambda_min_source: BoundSource,
}

impl ScaledMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Log-determinant of the unscaled matrix from that of the scaled one.
    pub fn unscaled_logdet(&self, alpha_scaled: f64) -> f64 {
        alpha_scaled - self.dim() as f64 * self.scale.ln()
    }
}

/// Rayleigh-quotient power iteration for the top eigenvalue of a positive
/// matrix. Returns the raw estimate (no safety multiplier).
pub fn power_iteration(a: &SparseHermitianMatrix, rel_tol: f64, max_iter: usize) -> f64 {
    let n = a.dim();
    // Deterministic start with no special alignment to any eigenvector.
    let mut x: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + (i as f64 + 1.0).sqrt() * 1e-3, 0.0)).collect();
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut prev = f64::NAN;
    for _ in 0..max_iter {
        let nx = norm(&x);
        x.iter_mut().for_each(|z| *z /= nx);
        let y = a.mul_vec(&x);
        let rq: f64 = x.iter().zip(&y).map(|(xi, yi)| (xi.conj() * yi).re).sum();
        if (rq - prev).abs() <= rel_tol * rq.abs() {
            return rq;
        }
        prev = rq;
        if norm(&y) == 0.0 {
            return 0.0;
        }
        x = y;
    }
    prev
}

/// Rescales `a` so the top eigenvalue bound maps to 1/2.
///
/// Positivity is always verified with the dense oracle.
pub fn rescale(a: &SparseHermitianMatrix, bounds: SpectralBounds) -> Result<ScaledMatrix> {
    let ev = dense_eigenvalues(a, DEFAULT_DENSE_CAP)?;
    let (true_min, true_max) = (ev[0], ev[ev.len() - 1]);
    if !(true_min > 0.0) {
        return Err(Error::NotPositive(true_min));
    }

    let (lambda_max_est, lambda_max_source) = match bounds.lambda_max {
        Some(b) => (b, BoundSource::Supplied),
        None => (power_iteration(a, POWER_TOL, 100_000) * POWER_SAFETY, BoundSource::PowerIteration),
    };
    if !(lambda_max_est > 0.0) || lambda_max_est < true_max * (1.0 - BOUND_SLACK) {
        return Err(Error::BoundViolation(format!(
            "upper bound {lambda_max_est:e} below largest eigenvalue {true_max:e}"
        )));
    }
    let (lambda_min_est, lambda_min_source) = match bounds.lambda_min {
        Some(b) => (b, BoundSource::Supplied),
        None => (true_min, BoundSource::Oracle),
    };
    if !(lambda_min_est > 0.0) || lambda_min_est > true_min * (1.0 + BOUND_SLACK) {
        return Err(Error::BoundViolation(format!(
            "lower bound {lambda_min_est:e} above smallest eigenvalue {true_min:e}"
        )));
    }

    let scale = 1.0 / (2.0 * lambda_max_est);
    let kappa_bound = (lambda_max_est / lambda_min_est).max(1.0);
    Ok(ScaledMatrix {
        matrix: a.scaled(scale),
        scale,
        lambda_max: LAMBDA_MAX,
        lambda_min: 1.0 / (2.0 * kappa_bound),
        kappa_bound,
        lambda_max_source,
        lambda_min_source,
    })
}

/// Dense spectrum of a scaled matrix.
pub fn exact_spectrum(a: &ScaledMatrix) -> Result<SpectrumInfo> {
    exact_spectrum_capped(a, DEFAULT_DENSE_CAP)
}

/// Roundoff that pushes an eigenvalue just past a bound already checked by
/// [`rescale`] is clamped back onto the bound.
pub fn exact_spectrum_capped(a: &ScaledMatrix, cap: usize) -> Result<SpectrumInfo> {
    let mut ev = dense_eigenvalues(&a.matrix, cap)?;
    for l in &mut ev {
        if *l > a.lambda_max && *l <= a.lambda_max * (1.0 + BOUND_SLACK) {
            *l = a.lambda_max;
        } else if *l < a.lambda_min && *l >= a.lambda_min * (1.0 - BOUND_SLACK) {
            *l = a.lambda_min;
        }
    }
    SpectrumInfo::from_eigenvalues(ev)
}
