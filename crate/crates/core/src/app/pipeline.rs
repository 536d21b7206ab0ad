//! Library entry points behind the `estimate` command.

use std::path::Path;

use serde::Serialize;

use crate::budget::{choose_parameters, choose_parameters_for, generic_f_error, ErrorBudget, Parameters};
use crate::error::{Error, Result};
use crate::estimators::{mean_and_std, EstimateReport};
use crate::functions::SpectralFunction;
use crate::matrix::{
    exact_spectrum, load_matrix, rescale, ScaledMatrix, SparseHermitianMatrix, SpectralBounds, SpectrumInfo,
};
use crate::qpe::{QpeConfig, QpeMode};
use crate::resources::{total_cost, CostInputs, ResourceReport};
use crate::sampler::{draw_batch, SampleString};

/// A loaded matrix, its rescaled form and the oracle spectrum of the latter.
#[derive(Debug, Clone)]
pub struct PreparedMatrix {
    pub original: SparseHermitianMatrix,
    pub scaled: ScaledMatrix,
    pub spectrum: SpectrumInfo,
}

impl PreparedMatrix {
    pub fn from_matrix(original: SparseHermitianMatrix, bounds: SpectralBounds) -> Result<Self> {
        let scaled = rescale(&original, bounds)?;
        let spectrum = exact_spectrum(&scaled)?;
        Ok(Self { original, scaled, spectrum })
    }
}

pub fn prepare(path: impl AsRef<Path>, bounds: SpectralBounds) -> Result<PreparedMatrix> {
    PreparedMatrix::from_matrix(load_matrix(path)?, bounds)
}

/// How `N` and `m` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sizing {
    Fixed {
        m: u32,
        n_samples: usize,
    },
    /// From a target relative error; missing statistics come from the oracle.
    Target {
        epsilon: f64,
        mu: Option<f64>,
        delta: Option<f64>,
        kappa: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateParams {
    pub function: SpectralFunction<f64>,
    pub mode: QpeMode,
    pub seed: u64,
    pub sizing: Sizing,
    /// Hamiltonian-simulation accuracy for the cost report; defaults to
    /// the target ε, else 0.01.
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StatSource {
    Oracle,
    Supplied,
}

/// Statistics of `f` over the exact spectrum, used to size the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizingStats {
    pub mu: f64,
    pub delta: f64,
    pub kappa: f64,
    pub mu_source: StatSource,
    pub delta_source: StatSource,
    pub kappa_source: StatSource,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateOutcome {
    pub report: EstimateReport<f64>,
    #[serde(skip)]
    pub samples: SampleString,
    pub parameters: Parameters,
    pub sizing_stats: SizingStats,
    /// Exact spectral sum of the scaled matrix.
    pub oracle_value: f64,
    pub relative_error_vs_oracle: f64,
    /// Log-determinant of the unscaled matrix, for `f = log`.
    pub unscaled_estimate: Option<f64>,
    pub resources: Option<ResourceReport<f64>>,
    pub resources_error: Option<String>,
}

fn pick(supplied: Option<f64>, oracle: f64) -> (f64, StatSource) {
    match supplied {
        Some(v) => (v, StatSource::Supplied),
        None => (oracle, StatSource::Oracle),
    }
}

/// Samples the scaled matrix and evaluates the estimator, its error budget
/// and the resource count.
pub fn estimate(prepared: &PreparedMatrix, params: &EstimateParams) -> Result<EstimateOutcome> {
    let f = params.function;
    let spectrum = &prepared.spectrum;
    let scaled = &prepared.scaled;
    let n = spectrum.dim();

    let f_values: Vec<f64> = spectrum.eigenvalues.iter().map(|&l| f.eval(l)).collect::<Result<_>>()?;
    let oracle_value = crate::scalar::pairwise_sum(&f_values);
    let (oracle_mu_f, oracle_delta_f) = mean_and_std(&f_values);

    let (sup_mu, sup_delta, sup_kappa, epsilon) = match params.sizing {
        Sizing::Target { epsilon, mu, delta, kappa } => (mu, delta, kappa, Some(epsilon)),
        Sizing::Fixed { .. } => (None, None, None, None),
    };
    let (mu, mu_source) = pick(sup_mu, oracle_mu_f);
    let (delta, delta_source) = pick(sup_delta, oracle_delta_f);
    let (kappa, kappa_source) = pick(sup_kappa, scaled.kappa_bound);
    let sizing_stats = SizingStats { mu, delta, kappa, mu_source, delta_source, kappa_source };
    let range = (1.0 / (2.0 * kappa), 0.5);

    let parameters = match params.sizing {
        Sizing::Fixed { m, n_samples } => Parameters { n_mc: n_samples, m },
        Sizing::Target { epsilon, .. } => match f {
            SpectralFunction::Log => choose_parameters(mu, delta, kappa, epsilon)?,
            _ => choose_parameters_for(&f, range, mu, delta, epsilon)?,
        },
    };

    let config = QpeConfig::new(parameters.m, params.mode)?;
    let samples = draw_batch(spectrum, &config, parameters.n_mc, params.seed)?;
    let mut report = EstimateReport::from_samples(&samples, &f, n)?;
    match f {
        SpectralFunction::Log => {
            report.error_budget =
                Some(ErrorBudget::evaluate(n, mu, delta, kappa, parameters.m, parameters.n_mc, epsilon)?);
        }
        _ => {
            report.generic_error_bound = Some(generic_f_error(&f, range, parameters.m, parameters.n_mc, mu, delta)?);
        }
    }

    let unscaled_estimate = matches!(f, SpectralFunction::Log).then(|| scaled.unscaled_logdet(report.estimate));
    let eta = params.eta.or(epsilon).unwrap_or(0.01);
    let cost = total_cost(&CostInputs {
        n,
        s: scaled.matrix.sparsity().max(1),
        m: parameters.m,
        n_samples: parameters.n_mc,
        eta,
        a_max: Some(scaled.matrix.max_entry_modulus()),
        query_cost: None,
    });
    let (resources, resources_error) = match cost {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let relative_error_vs_oracle =
        if oracle_value != 0.0 { (report.estimate - oracle_value).abs() / oracle_value.abs() } else { f64::NAN };
    if !relative_error_vs_oracle.is_finite() && oracle_value != 0.0 {
        return Err(Error::Eval { x: report.estimate, msg: "non-finite estimate".into() });
    }

    Ok(EstimateOutcome {
        report,
        samples,
        parameters,
        sizing_stats,
        oracle_value,
        relative_error_vs_oracle,
        unscaled_estimate,
        resources,
        resources_error,
    })
}
