//! Adaptive choice of pointer size and sample count from plug-in estimates.
//!
//! Each pass samples at a fixed `m`. A round computes `μ̂, Δ̂, κ̂` from the
//! current string and then either restarts with a larger `m` (discarding
//! every sample of the pass), grows `N` towards the plug-in requirement, or
//! accepts.

use serde::Serialize;

use crate::budget::ErrorBudget;
use crate::error::{Error, Result};
use crate::estimators::{logdet_estimate, sample_stats, EstimateReport, SampleStats};
use crate::functions::SpectralFunction;
use crate::matrix::{exact_spectrum, ScaledMatrix, SpectrumInfo};
use crate::qpe::{QpeConfig, QpeMode, MAX_POINTER_QUBITS};
use crate::rng::derive_seed;
use crate::sampler::{draw_records, SampleRecord, SampleString};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptiveConfig {
    /// Target relative error, in `(0, 1)`.
    pub epsilon: f64,
    pub seed_m: u32,
    pub seed_n: usize,
    pub max_restarts: usize,
    /// Multiplier applied to `N` when more samples are needed.
    pub growth_factor: f64,
    pub seed: u64,
    /// `κ̂` is multiplied by this in the pointer-size checks, since the
    /// smallest sampled eigenvalue overestimates the true minimum.
    pub kappa_safety: f64,
    /// Hard cap on the samples of a single pass.
    pub max_samples: usize,
}

impl AdaptiveConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            seed_m: 4,
            seed_n: 64,
            max_restarts: 8,
            growth_factor: 2.0,
            seed,
            kappa_safety: 2.0,
            max_samples: 1 << 26,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon must be in (0, 1), got {}", self.epsilon));
        }
        if self.seed_m < 2 || self.seed_m > MAX_POINTER_QUBITS {
            return bad(format!("seed m must be in 2..={MAX_POINTER_QUBITS}, got {}", self.seed_m));
        }
        if self.seed_n < 16 {
            return bad(format!("seed N must be >= 16, got {}", self.seed_n));
        }
        if self.max_restarts < 1 {
            return bad("max restarts must be >= 1".into());
        }
        if !(self.growth_factor > 1.0) {
            return bad(format!("growth factor must exceed 1, got {}", self.growth_factor));
        }
        if !(self.kappa_safety >= 1.0) {
            return bad(format!("kappa safety factor must be >= 1, got {}", self.kappa_safety));
        }
        if self.max_samples < self.seed_n {
            return bad("sample cap below seed N".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accept,
    GrowN,
    Restart,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    pub pass: usize,
    pub m: u32,
    pub n_samples: usize,
    /// `None` when zero outcomes made the statistics undefined.
    pub stats: Option<SampleStats<f64>>,
    pub required_n: Option<usize>,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdaptiveTrace {
    pub rounds: Vec<RoundRecord>,
    pub restarts: usize,
    /// Samples drawn over every pass, discarded ones included.
    pub total_samples_drawn: usize,
}

enum Verdict {
    Restart(u32),
    Grow(usize, usize),
    Accept,
}

struct RoundCheck {
    stats: Option<SampleStats<f64>>,
    verdict: Verdict,
}

fn check_round(records: &[SampleRecord], m: u32, cfg: &AdaptiveConfig, n: usize) -> Result<RoundCheck> {
    let nonzero: Vec<SampleRecord> = records.iter().filter(|r| r.outcome != 0).copied().collect();
    let string = |records: Vec<SampleRecord>| SampleString { records, n, seed: cfg.seed, mode: QpeMode::Floor };

    if nonzero.len() < records.len() {
        // A zero outcome means 2^-m exceeds some eigenvalue: m is too small.
        let mut m_new = m + 1;
        if nonzero.len() >= 2 {
            let st = sample_stats::<f64>(&string(nonzero))?;
            m_new = m_new.max(required_m(&st, cfg)? + 1);
        }
        return Ok(RoundCheck { stats: None, verdict: Verdict::Restart(m_new) });
    }

    let st = sample_stats::<f64>(&string(records.to_vec()))?;
    if st.mu_hat == 0.0 {
        return Err(Error::Domain("sampled log-spectrum has zero mean".into()));
    }
    let abs_mu = st.mu_hat.abs();
    let kappa_check = cfg.kappa_safety * st.kappa_hat;
    let resolution = 2f64.powi(-(m as i32));
    let need_m = (4.0 * kappa_check / (cfg.epsilon * abs_mu)).log2();
    let x = 2.0 * st.kappa_hat * resolution;
    let qpe_term = if x < 1.0 { x / (1.0 - x) / abs_mu } else { f64::INFINITY };

    let m_ok = f64::from(m) >= need_m;
    let regime_ok = resolution < 1.0 / (2.0 * kappa_check);
    let qpe_ok = qpe_term <= cfg.epsilon / 2.0;
    if !(m_ok && regime_ok && qpe_ok) {
        let m_new = (required_m(&st, cfg)? + 1).max(m + 1);
        return Ok(RoundCheck { stats: Some(st), verdict: Verdict::Restart(m_new) });
    }

    let required_n = (2.0 * st.delta_hat / (abs_mu * cfg.epsilon)).powi(2).ceil();
    let n_now = records.len();
    if (n_now as f64) < required_n {
        let grown = ((n_now as f64) * cfg.growth_factor).ceil().min(required_n);
        if grown > cfg.max_samples as f64 {
            return Err(Error::TooLarge(format!("pass needs {required_n} samples, cap is {}", cfg.max_samples)));
        }
        return Ok(RoundCheck { stats: Some(st), verdict: Verdict::Grow(grown as usize, required_n as usize) });
    }
    Ok(RoundCheck { stats: Some(st), verdict: Verdict::Accept })
}

/// `⌈log₂(4 s κ̂ / (ε|μ̂|))⌉` with safety factor `s`.
fn required_m(st: &SampleStats<f64>, cfg: &AdaptiveConfig) -> Result<u32> {
    let v = (4.0 * cfg.kappa_safety * st.kappa_hat / (cfg.epsilon * st.mu_hat.abs())).log2().ceil();
    if v.is_finite() && v < f64::from(MAX_POINTER_QUBITS) {
        Ok(v.max(1.0) as u32)
    } else {
        Err(Error::Regime(format!("required pointer size log2 = {v} exceeds {MAX_POINTER_QUBITS}")))
    }
}

/// Adaptive log-determinant estimate of a scaled matrix.
pub fn run_adaptive(
    matrix: &ScaledMatrix,
    config: &AdaptiveConfig,
    mode: QpeMode,
) -> Result<(EstimateReport<f64>, AdaptiveTrace)> {
    config.validate()?;
    let spectrum = exact_spectrum(matrix)?;
    run_adaptive_on_spectrum(&spectrum, config, mode)
}

/// Same as [`run_adaptive`] with the simulated spectrum supplied directly.
pub fn run_adaptive_on_spectrum(
    spectrum: &SpectrumInfo,
    config: &AdaptiveConfig,
    mode: QpeMode,
) -> Result<(EstimateReport<f64>, AdaptiveTrace)> {
    config.validate()?;
    let n = spectrum.dim();
    let mut trace = AdaptiveTrace { rounds: Vec::new(), restarts: 0, total_samples_drawn: 0 };
    let mut m = config.seed_m;
    let mut pass = 0usize;

    loop {
        let qpe = QpeConfig::new(m, mode)?;
        let pass_seed = derive_seed(config.seed, pass as u64);
        let mut records = draw_records(spectrum, &qpe, pass_seed, 0, config.seed_n)?;
        trace.total_samples_drawn += records.len();

        let restart_to = loop {
            let check = check_round(&records, m, config, n)?;
            let mut round = RoundRecord {
                pass,
                m,
                n_samples: records.len(),
                stats: check.stats,
                required_n: None,
                decision: Decision::Accept,
            };
            match check.verdict {
                Verdict::Restart(m_new) => {
                    round.decision = Decision::Restart;
                    trace.rounds.push(round);
                    break m_new;
                }
                Verdict::Grow(target, required) => {
                    round.decision = Decision::GrowN;
                    round.required_n = Some(required);
                    trace.rounds.push(round);
                    let extra = draw_records(spectrum, &qpe, pass_seed, records.len(), target - records.len())?;
                    trace.total_samples_drawn += extra.len();
                    records.extend(extra);
                }
                Verdict::Accept => {
                    trace.rounds.push(round);
                    let st = check.stats.expect("accepted round has statistics");
                    let samples = SampleString { records, n, seed: config.seed, mode };
                    let mut report = EstimateReport::from_samples(&samples, &SpectralFunction::Log, n)?;
                    debug_assert_eq!(report.estimate, logdet_estimate::<f64>(&samples, n)?);
                    report.error_budget = Some(ErrorBudget::evaluate(
                        n,
                        st.mu_hat,
                        st.delta_hat,
                        st.kappa_hat,
                        m,
                        samples.len(),
                        Some(config.epsilon),
                    )?);
                    return Ok((report, trace));
                }
            }
        };

        if trace.restarts >= config.max_restarts {
            return Err(Error::RestartsExhausted { restarts: trace.restarts, m });
        }
        if restart_to > MAX_POINTER_QUBITS {
            return Err(Error::Regime(format!("pointer size {restart_to} exceeds {MAX_POINTER_QUBITS}")));
        }
        trace.restarts += 1;
        m = restart_to;
        pass += 1;
    }
}
