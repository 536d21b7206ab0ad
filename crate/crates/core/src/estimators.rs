//! Monte Carlo spectral-sum estimators over sample strings.

use serde::Serialize;

use crate::budget::ErrorBudget;
use crate::error::{Error, Result};
use crate::functions::SpectralFunction;
use crate::qpe::QpeMode;
use crate::sampler::SampleString;
use crate::scalar::{pairwise_sum, Real};

fn values<T: Real>(samples: &SampleString, f: &SpectralFunction<T>) -> Result<Vec<T>> {
    samples.lambda_tildes().map(|l| f.eval(T::lit(l))).collect()
}

fn scaled_mean<T: Real>(values: &[T], n: usize) -> Result<T> {
    if values.is_empty() {
        return Err(Error::InvalidN(0));
    }
    Ok(T::from_count(n) * pairwise_sum(values) / T::from_count(values.len()))
}

/// `(n/N) Σ f(λ̃_ℓ)`.
pub fn spectral_sum_estimate<T: Real>(samples: &SampleString, f: &SpectralFunction<T>, n: usize) -> Result<T> {
    scaled_mean(&values(samples, f)?, n)
}

/// `(n/N) Σ log λ̃_ℓ`. A zero outcome aborts with [`Error::ZeroOutcome`].
pub fn logdet_estimate<T: Real>(samples: &SampleString, n: usize) -> Result<T> {
    if let Some(index) = samples.records.iter().position(|r| r.outcome == 0) {
        return Err(Error::ZeroOutcome { index });
    }
    spectral_sum_estimate(samples, &SpectralFunction::Log, n)
}

/// Partition function `Σ exp(-β λ_j)`, `β` in scaled-energy units.
pub fn partition_function_estimate<T: Real>(samples: &SampleString, beta: T, n: usize) -> Result<T> {
    spectral_sum_estimate(samples, &SpectralFunction::ExpNegBeta(beta), n)
}

/// Von Neumann entropy `-Σ p_j log p_j`. The sampled eigenvalues are taken
/// as probabilities; their normalization is not checked.
pub fn entropy_estimate<T: Real>(samples: &SampleString, n: usize) -> Result<T> {
    spectral_sum_estimate(samples, &SpectralFunction::NegXLogX, n)
}

/// Plug-in statistics of the log-samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats<T> {
    pub mu_hat: T,
    /// Population (1/N) standard deviation.
    pub delta_hat: T,
    pub lambda_min_hat: T,
    pub kappa_hat: T,
}

pub fn sample_stats<T: Real>(samples: &SampleString) -> Result<SampleStats<T>> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples { need: 2, got: samples.len() });
    }
    let logs = values(samples, &SpectralFunction::<T>::Log).map_err(|_| {
        let index = samples.records.iter().position(|r| r.outcome == 0).unwrap_or(0);
        Error::ZeroOutcome { index }
    })?;
    let (mu_hat, delta_hat) = mean_and_std(&logs);
    let (lo, hi) = samples.lambda_tildes().fold((f64::INFINITY, 0.0f64), |(lo, hi), l| (lo.min(l), hi.max(l)));
    Ok(SampleStats { mu_hat, delta_hat, lambda_min_hat: T::lit(lo), kappa_hat: T::lit(hi / lo) })
}

/// Mean and population standard deviation.
pub fn mean_and_std<T: Real>(v: &[T]) -> (T, T) {
    let n = T::from_count(v.len());
    let mean = pairwise_sum(v) / n;
    let sq: Vec<T> = v.iter().map(|&x| (x - mean) * (x - mean)).collect();
    (mean, (pairwise_sum(&sq) / n).sqrt())
}

/// Result of one estimation run with provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport<T> {
    pub function: String,
    pub estimate: T,
    pub n: usize,
    pub n_used: usize,
    pub m_used: u32,
    /// Sample mean of `f(λ̃)`.
    pub sample_mu_f: T,
    /// Sample standard deviation of `f(λ̃)`.
    pub sample_delta_f: T,
    pub error_budget: Option<ErrorBudget<T>>,
    /// Relative-error bound for non-log functions.
    pub generic_error_bound: Option<T>,
    pub seed: u64,
    pub mode: QpeMode,
    /// Floor truncation only rounds eigenvalues down, so the error of a
    /// log-determinant estimate leans towards smaller values.
    pub skewed_low: bool,
}

impl<T: Real> EstimateReport<T> {
    /// Estimate plus sample statistics of `f` over the string.
    pub fn from_samples(samples: &SampleString, f: &SpectralFunction<T>, n: usize) -> Result<Self> {
        let estimate = match f {
            SpectralFunction::Log => logdet_estimate(samples, n)?,
            _ => spectral_sum_estimate(samples, f, n)?,
        };
        let vals = values(samples, f)?;
        let (mu_f, delta_f) = mean_and_std(&vals);
        Ok(Self {
            function: f.to_string(),
            estimate,
            n,
            n_used: samples.len(),
            m_used: samples.records.first().map_or(0, |r| r.m_used),
            sample_mu_f: mu_f,
            sample_delta_f: delta_f,
            error_budget: None,
            generic_error_bound: None,
            seed: samples.seed,
            mode: samples.mode,
            skewed_low: samples.mode == QpeMode::Floor,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::SampleRecord;

    fn string(ks: &[u64], m: u32) -> SampleString {
        SampleString {
            records: ks.iter().map(|&k| SampleRecord::new(0, k, m)).collect(),
            n: 1,
            seed: 0,
            mode: QpeMode::Floor,
        }
    }

    #[test]
    fn constant_samples() {
        let s = string(&[4; 10], 3);
        let a: f64 = logdet_estimate(&s, 4).unwrap();
        assert!((a - 4.0 * 0.5f64.ln()).abs() < 1e-15);
        let st: SampleStats<f64> = sample_stats(&s).unwrap();
        assert!((st.mu_hat + std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(st.delta_hat, 0.0);
        assert_eq!(st.kappa_hat, 1.0);
    }

    #[test]
    fn zero_outcome_aborts() {
        let s = string(&[4, 0, 2], 3);
        assert!(matches!(logdet_estimate::<f64>(&s, 2).unwrap_err(), Error::ZeroOutcome { index: 1 }));
        assert_eq!(sample_stats::<f64>(&s).unwrap_err().kind(), "ZeroOutcome");
    }

    #[test]
    fn two_point_stats() {
        let s = string(&[4, 1, 4, 1], 3);
        let st: SampleStats<f64> = sample_stats(&s).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!((st.mu_hat + 2.0 * ln2).abs() < 1e-15);
        // Two equally weighted points at ln(1/2), ln(1/8): half their distance.
        assert!((st.delta_hat - ln2).abs() < 1e-15);
        assert_eq!(st.kappa_hat, 4.0);
        assert_eq!(st.lambda_min_hat, 0.125);
    }

    #[test]
    fn single_sample_is_insufficient() {
        assert_eq!(sample_stats::<f64>(&string(&[3], 3)).unwrap_err().kind(), "InsufficientSamples");
    }

    #[test]
    fn partition_at_zero_beta_is_n() {
        let s = string(&[1, 3, 7, 2], 3);
        assert_eq!(partition_function_estimate(&s, 0.0f64, 7).unwrap(), 7.0);
    }

    #[test]
    fn partition_single_term() {
        let s = string(&[4; 5], 3);
        let z: f64 = partition_function_estimate(&s, 2.0, 1).unwrap();
        assert!((z - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_entropy() {
        let s = string(&[2; 9], 3);
        let h: f64 = entropy_estimate(&s, 4).unwrap();
        assert!((h - 4f64.ln()).abs() < 1e-15);
        let s = string(&[4; 3], 3);
        let h: f64 = entropy_estimate(&s, 2).unwrap();
        assert!((h - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn report_recomputes_estimate() {
        let s = string(&[1, 2, 3, 4], 3);
        let r = EstimateReport::<f64>::from_samples(&s, &SpectralFunction::Log, 3).unwrap();
        let again: f64 = logdet_estimate(&s, 3).unwrap();
        assert_eq!(r.estimate, again);
        assert_eq!(r.n_used, 4);
        assert_eq!(r.m_used, 3);
        assert!((r.estimate - 3.0 * r.sample_mu_f).abs() < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let s = string(&[4, 1, 4, 1], 3);
        let a: f32 = logdet_estimate(&s, 2).unwrap();
        assert!((a - (-4.0 * std::f32::consts::LN_2)).abs() < 1e-6);
    }
}
