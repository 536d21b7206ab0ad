//! Error formulas and parameter selection for the sampled estimators.
//!
//! `δλ` is identified with `2^-m` throughout.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::SpectralFunction;
use crate::qpe::MAX_POINTER_QUBITS;
use crate::scalar::Real;

/// Floor on the Monte Carlo sample count when the log-spectrum variance vanishes.
pub const MIN_SAMPLES: usize = 16;

fn resolution<T: Real>(m: u32) -> T {
    T::exp2i(-(m as i32))
}

fn check_kappa<T: Real>(kappa: T) -> Result<()> {
    if kappa >= T::one() && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("kappa must be >= 1, got {kappa}")))
    }
}

fn check_mu<T: Real>(mu: T) -> Result<T> {
    if mu != T::zero() && mu.is_finite() {
        Ok(mu.abs())
    } else {
        Err(Error::Domain(format!("mu must be finite and nonzero, got {mu}")))
    }
}

/// `x = 2κ 2^-m`, required to be below one.
fn regime<T: Real>(kappa: T, m: u32) -> Result<T> {
    let x = T::lit(2.0) * kappa * resolution::<T>(m);
    if x < T::one() {
        Ok(x)
    } else {
        Err(Error::Regime(format!("2κ·2^-m = {x} >= 1 (kappa = {kappa}, m = {m}); increase m")))
    }
}

/// Statistical RMSE `n Δ / √N`.
pub fn mc_error<T: Real>(delta: T, n_samples: usize, n: usize) -> Result<T> {
    if n_samples == 0 {
        return Err(Error::InvalidN(0));
    }
    if !(delta >= T::zero()) {
        return Err(Error::Domain(format!("delta must be >= 0, got {delta}")));
    }
    Ok(T::from_count(n) * delta / T::from_count(n_samples).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QpeBounds<T> {
    /// `n κ 2^(1−m)`
    pub main: T,
    /// `2 n κ 2^-m / (1 − 2κ 2^-m)`
    pub appendix: T,
}

pub fn qpe_error_bounds<T: Real>(kappa: T, m: u32, n: usize) -> Result<QpeBounds<T>> {
    check_kappa(kappa)?;
    let x = regime(kappa, m)?;
    let n = T::from_count(n);
    Ok(QpeBounds { main: n * kappa * T::exp2i(1 - m as i32), appendix: n * x / (T::one() - x) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelativeError<T> {
    /// `(1/|μ|)(2κ/2^m + Δ/√N)`
    pub main_form: T,
    /// `(1/|μ|)(2κ2^-m/(1 − 2κ2^-m) + Δ/√N)`
    pub appendix_form: T,
}

pub fn total_relative_error<T: Real>(mu: T, delta: T, kappa: T, m: u32, n_samples: usize) -> Result<RelativeError<T>> {
    let abs_mu = check_mu(mu)?;
    check_kappa(kappa)?;
    let x = regime(kappa, m)?;
    let stat = mc_error(delta, n_samples, 1)?;
    Ok(RelativeError { main_form: (x + stat) / abs_mu, appendix_form: (x / (T::one() - x) + stat) / abs_mu })
}

/// Sample count and pointer size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub n_mc: usize,
    pub m: u32,
}

fn samples_for<T: Real>(delta: T, abs_mu: T, epsilon: T) -> Result<usize> {
    let raw = (T::lit(2.0) * delta / (abs_mu * epsilon)).powi(2).ceil();
    let n = raw
        .to_usize()
        .filter(|&n| n < (1usize << 48))
        .ok_or_else(|| Error::TooLarge(format!("required sample count {raw} is too large")))?;
    Ok(n.max(MIN_SAMPLES))
}

fn qubits_for<T: Real>(grid: T) -> Result<u32> {
    let m = grid.log2().ceil().max(T::one());
    match m.to_u32() {
        Some(m) if m <= MAX_POINTER_QUBITS => Ok(m),
        _ => Err(Error::Regime(format!("required pointer size 2^m >= {grid} exceeds 2^{MAX_POINTER_QUBITS}"))),
    }
}

/// `N = ⌈(2Δ/(|μ|ε))²⌉` (at least [`MIN_SAMPLES`]) and the smallest `m`
/// with `2^m ≥ 2κ(2/(|μ|ε) + 1)`; together they make the appendix-form
/// relative error at most `ε`.
pub fn choose_parameters<T: Real>(mu: T, delta: T, kappa: T, epsilon: T) -> Result<Parameters> {
    let abs_mu = check_mu(mu)?;
    check_kappa(kappa)?;
    if !(epsilon > T::zero()) || !(delta >= T::zero()) {
        return Err(Error::Domain(format!("need epsilon > 0 and delta >= 0 (got {epsilon}, {delta})")));
    }
    let two = T::lit(2.0);
    Ok(Parameters {
        n_mc: samples_for(delta, abs_mu, epsilon)?,
        m: qubits_for(two * kappa * (two / (abs_mu * epsilon) + T::one()))?,
    })
}

/// Same split for a generic `f`: `N = ⌈(2Δ_f/(|μ_f|ε))²⌉`, `2^m ≥ 2|f'|max/(|μ_f|ε)`.
pub fn choose_parameters_for<T: Real>(
    f: &SpectralFunction<T>,
    range: (T, T),
    mu_f: T,
    delta_f: T,
    epsilon: T,
) -> Result<Parameters> {
    let abs_mu = check_mu(mu_f)?;
    if !(epsilon > T::zero()) || !(delta_f >= T::zero()) {
        return Err(Error::Domain(format!("need epsilon > 0 and delta >= 0 (got {epsilon}, {delta_f})")));
    }
    let slope = f.max_abs_derivative(range.0, range.1)?;
    Ok(Parameters {
        n_mc: samples_for(delta_f, abs_mu, epsilon)?,
        m: qubits_for(T::lit(2.0) * slope / (abs_mu * epsilon))?,
    })
}

/// Chebyshev tail bound `min(1, (err/γ)²)`.
pub fn chebyshev_bound<T: Real>(delta_alpha_err: T, gamma: T) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidGamma(gamma.to_f64().unwrap_or(f64::NAN)));
    }
    Ok((delta_alpha_err / gamma).powi(2).min(T::one()))
}

/// Relative error of a generic spectral sum,
/// `(1/|μ_f|)(|f'|max/2^m + Δ_f/√N)` with `|f'|max` over `range`.
pub fn generic_f_error<T: Real>(
    f: &SpectralFunction<T>,
    range: (T, T),
    m: u32,
    n_samples: usize,
    mu_f: T,
    delta_f: T,
) -> Result<T> {
    let abs_mu = check_mu(mu_f)?;
    let slope = f.max_abs_derivative(range.0, range.1)?;
    Ok((slope * resolution::<T>(m) + mc_error(delta_f, n_samples, 1)?) / abs_mu)
}

/// Every error term of a log-determinant estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBudget<T> {
    pub n: usize,
    pub mu: T,
    pub delta: T,
    pub kappa: T,
    pub delta_alpha_mc: T,
    pub delta_alpha_qpe_main: T,
    pub delta_alpha_qpe_appendix: T,
    /// Sum bound `Δα_qpe + Δα_mc` (appendix form).
    pub delta_alpha_err: T,
    /// `Δα_err / (n|μ|)`
    pub relative_error_bound: T,
    pub epsilon_target: Option<T>,
    pub n_mc: usize,
    pub m: u32,
}

impl<T: Real> ErrorBudget<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn evaluate(
        n: usize,
        mu: T,
        delta: T,
        kappa: T,
        m: u32,
        n_mc: usize,
        epsilon_target: Option<T>,
    ) -> Result<Self> {
        let abs_mu = check_mu(mu)?;
        let mc = mc_error(delta, n_mc, n)?;
        let qpe = qpe_error_bounds(kappa, m, n)?;
        let err = qpe.appendix + mc;
        Ok(Self {
            n,
            mu,
            delta,
            kappa,
            delta_alpha_mc: mc,
            delta_alpha_qpe_main: qpe.main,
            delta_alpha_qpe_appendix: qpe.appendix,
            delta_alpha_err: err,
            relative_error_bound: err / (T::from_count(n) * abs_mu),
            epsilon_target,
            n_mc,
            m,
        })
    }

    pub fn meets_target(&self) -> Option<bool> {
        self.epsilon_target.map(|e| self.relative_error_bound <= e)
    }
}
