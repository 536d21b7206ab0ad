//! Command dispatch and the JSON report.

use std::fs;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Command, RunConfig};
use super::pipeline::{estimate, prepare, EstimateParams, PreparedMatrix, Sizing};
use crate::adaptive::{run_adaptive, AdaptiveConfig};
use crate::budget::{chebyshev_bound, choose_parameters, ErrorBudget};
use crate::error::{Error, Result};
use crate::functions::SpectralFunction;
use crate::matrix::{dense_eigenvalues, load_matrix, SpectralBounds, DEFAULT_DENSE_CAP};
use crate::qpe::QpeConfig;
use crate::resources::{total_cost, CostInputs, ResourceReport};
use crate::sampler::draw_batch;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub mode: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

/// The report written for every invocation. `timestamp` is the only field
/// that differs between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Command,
    pub timestamp: String,
    pub provenance: Provenance,
    pub inputs: Value,
    pub results: Value,
    pub error_budget: Value,
    pub resources: Value,
    pub trace: Value,
    pub error: Option<ErrorInfo>,
}

impl Report {
    fn new(config: &RunConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: config.command,
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
            provenance: Provenance {
                seed: config.seed,
                mode: config.mode.to_string(),
                version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            },
            inputs: serde_json::to_value(config).unwrap_or(Value::Null),
            results: Value::Null,
            error_budget: Value::Null,
            resources: Value::Null,
            trace: Value::Null,
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The JSON text with the timestamp blanked, for comparing runs.
    pub fn to_json_masked(&self) -> String {
        Report { timestamp: String::new(), ..self.clone() }.to_json()
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: Report,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Runs one command. The report is written to `output_path` when set;
/// otherwise the caller decides where it goes.
pub fn run(config: &RunConfig) -> RunOutcome {
    let mut report = Report::new(config);
    let result = config.validate().and_then(|()| dispatch(config, &mut report));
    let exit_code = match result {
        Ok(()) => 0,
        Err(e) => {
            report.error = Some(ErrorInfo { kind: e.kind().to_string(), message: e.to_string() });
            e.exit_code()
        }
    };
    let exit_code = match &config.output_path {
        Some(path) => match fs::write(path, report.to_json()) {
            Ok(()) => exit_code,
            Err(e) => {
                let e = Error::Io(e);
                report.error = Some(ErrorInfo { kind: e.kind().to_string(), message: e.to_string() });
                e.exit_code()
            }
        },
        None => exit_code,
    };
    RunOutcome { exit_code, report }
}

fn bounds(config: &RunConfig) -> SpectralBounds {
    SpectralBounds { lambda_max: config.lambda_max, lambda_min: config.lambda_min }
}

fn prepared(config: &RunConfig) -> Result<PreparedMatrix> {
    prepare(config.matrix_path.as_deref().expect("validated"), bounds(config))
}

fn write_dump(path: Option<&Path>, text: impl FnOnce() -> String) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, text())?;
    }
    Ok(())
}

fn dispatch(config: &RunConfig, report: &mut Report) -> Result<()> {
    match config.command {
        Command::Validate => validate(config, report),
        Command::Spectrum => spectrum(config, report),
        Command::Sample => sample(config, report),
        Command::Estimate => run_estimate(config, report),
        Command::Budget => budget(config, report),
        Command::Cost => cost(config, report),
        Command::Adaptive => adaptive(config, report),
    }
}

fn validate(config: &RunConfig, report: &mut Report) -> Result<()> {
    let a = load_matrix(config.matrix_path.as_deref().expect("validated"))?;
    let ev = dense_eigenvalues(&a, DEFAULT_DENSE_CAP)?;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    report.results = json!({
        "dim": a.dim(),
        "nonzeros": a.entries().len(),
        "sparsity": a.sparsity(),
        "max_entry_modulus": a.max_entry_modulus(),
        "real": a.is_real(),
        "hermitian": true,
        "positive_definite": lo > 0.0,
        "lambda_min": lo,
        "lambda_max": hi,
    });
    if lo > 0.0 {
        Ok(())
    } else {
        Err(Error::NotPositive(lo))
    }
}

fn spectrum(config: &RunConfig, report: &mut Report) -> Result<()> {
    let p = prepared(config)?;
    let s = &p.spectrum;
    let unscaled: Vec<f64> = s.eigenvalues.iter().map(|l| l / p.scaled.scale).collect();
    report.results = json!({
        "scaling": to_value(&p.scaled),
        "eigenvalues_scaled": s.eigenvalues,
        "eigenvalues": unscaled,
        "alpha_scaled": s.alpha,
        "mu": s.mu,
        "delta": s.delta,
        "kappa_actual": s.kappa_actual,
        "logdet": p.scaled.unscaled_logdet(s.alpha),
    });
    Ok(())
}

fn sample(config: &RunConfig, report: &mut Report) -> Result<()> {
    let p = prepared(config)?;
    let qpe = QpeConfig::new(config.m.expect("validated"), config.mode)?;
    let samples = draw_batch(&p.spectrum, &qpe, config.samples.expect("validated"), config.seed.expect("validated"))?;
    write_dump(config.dump_samples.as_deref(), || samples.to_dump())?;
    let zeros = samples.records.iter().filter(|r| r.outcome == 0).count();
    let lt: Vec<f64> = samples.lambda_tildes().collect();
    report.results = json!({
        "n": samples.n,
        "n_samples": samples.len(),
        "m": qpe.m(),
        "zero_outcomes": zeros,
        "mean_lambda_tilde": crate::scalar::pairwise_sum(&lt) / lt.len() as f64,
        "min_lambda_tilde": lt.iter().copied().fold(f64::INFINITY, f64::min),
        "max_lambda_tilde": lt.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        "outcomes": samples.records.iter().map(|r| [r.eigen_index as u64, r.outcome]).collect::<Vec<_>>(),
    });
    Ok(())
}

fn run_estimate(config: &RunConfig, report: &mut Report) -> Result<()> {
    let p = prepared(config)?;
    let sizing = match (config.m, config.samples, config.epsilon) {
        (Some(m), Some(n_samples), _) => Sizing::Fixed { m, n_samples },
        (_, _, Some(epsilon)) => {
            // Supplied statistics describe the log spectrum only.
            let log = matches!(config.function, SpectralFunction::Log);
            Sizing::Target {
                epsilon,
                mu: config.mu.filter(|_| log),
                delta: config.delta.filter(|_| log),
                kappa: config.kappa,
            }
        }
        _ => unreachable!("validated"),
    };
    let params = EstimateParams {
        function: config.function,
        mode: config.mode,
        seed: config.seed.expect("validated"),
        sizing,
        eta: config.eta,
    };
    let out = estimate(&p, &params)?;
    write_dump(config.dump_samples.as_deref(), || out.samples.to_dump())?;
    report.error_budget = to_value(&out.report.error_budget);
    report.resources = match (&out.resources, &out.resources_error) {
        (Some(r), _) => to_value(r),
        (None, Some(e)) => json!({ "unavailable": e }),
        _ => Value::Null,
    };
    report.results = json!({
        "estimate": to_value(&out.report),
        "unscaled_estimate": out.unscaled_estimate,
        "scale": p.scaled.scale,
        "oracle_value": out.oracle_value,
        "relative_error_vs_oracle": out.relative_error_vs_oracle,
        "parameters": to_value(&out.parameters),
        "sizing": to_value(&sizing),
        "sizing_stats": to_value(&out.sizing_stats),
    });
    Ok(())
}

fn budget(config: &RunConfig, report: &mut Report) -> Result<()> {
    let (mu, delta, kappa, eps) = (
        config.mu.expect("validated"),
        config.delta.expect("validated"),
        config.kappa.expect("validated"),
        config.epsilon.expect("validated"),
    );
    let chosen = choose_parameters(mu, delta, kappa, eps)?;
    let m = config.m.unwrap_or(chosen.m);
    let n_mc = config.samples.unwrap_or(chosen.n_mc);
    let n = config.n.unwrap_or(1);
    let b = ErrorBudget::evaluate(n, mu, delta, kappa, m, n_mc, Some(eps))?;
    let tail = config.gamma.map(|g| chebyshev_bound(b.delta_alpha_err, g)).transpose()?;
    report.results = json!({
        "chosen": to_value(&chosen),
        "meets_target": b.meets_target(),
        "chebyshev_tail": tail,
        "gamma": config.gamma,
    });
    report.error_budget = to_value(&b);
    Ok(())
}

const SWEEP_HEADER: [&str; 13] = [
    "epsilon",
    "n",
    "s",
    "m",
    "N",
    "eta",
    "tau",
    "queries",
    "two_qubit_gates",
    "t_u",
    "n_qpe_cost",
    "total_steps",
    "t_lgd",
];

fn cost_inputs(config: &RunConfig, m: u32, n_samples: usize) -> CostInputs<f64> {
    CostInputs {
        n: config.n.expect("validated"),
        s: config.s.expect("validated"),
        m,
        n_samples,
        eta: config.eta.expect("validated"),
        a_max: config.a_max,
        query_cost: config.query_cost,
    }
}

/// Least-squares slope of `y` against `x`.
fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn cost(config: &RunConfig, report: &mut Report) -> Result<()> {
    if config.sweep_epsilon.is_empty() {
        let r = total_cost(&cost_inputs(config, config.m.expect("validated"), config.samples.expect("validated")))?;
        report.resources = to_value(&r);
        report.results = json!({ "t_lgd": r.t_lgd, "total_steps": r.total_steps });
        return Ok(());
    }
    let (mu, delta, kappa) =
        (config.mu.expect("validated"), config.delta.expect("validated"), config.kappa.expect("validated"));
    let mut rows: Vec<(f64, ResourceReport<f64>)> = Vec::new();
    for &eps in &config.sweep_epsilon {
        let p = choose_parameters(mu, delta, kappa, eps)?;
        rows.push((eps, total_cost(&cost_inputs(config, p.m, p.n_mc))?));
    }
    let x: Vec<f64> = rows.iter().map(|(e, _)| (1.0 / e).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|(_, r)| r.t_lgd.ln()).collect();
    let slope = (rows.len() >= 2).then(|| fit_slope(&x, &y));

    if let Some(path) = &config.csv_path {
        let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
        w.write_record(SWEEP_HEADER).map_err(csv_error)?;
        for (eps, r) in &rows {
            let i = &r.inputs;
            w.write_record(&[
                eps.to_string(),
                i.n.to_string(),
                i.s.to_string(),
                i.m.to_string(),
                i.n_samples.to_string(),
                i.eta.to_string(),
                r.tau.to_string(),
                r.queries.to_string(),
                r.two_qubit_gates.to_string(),
                r.t_u.to_string(),
                r.n_qpe_cost.to_string(),
                r.total_steps.to_string(),
                r.t_lgd.to_string(),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
    }
    report.resources =
        to_value(&rows.iter().map(|(e, r)| json!({ "epsilon": e, "report": to_value(r) })).collect::<Vec<_>>());
    report.results = json!({
        "epsilons": config.sweep_epsilon,
        "t_lgd": rows.iter().map(|(_, r)| r.t_lgd).collect::<Vec<_>>(),
        "loglog_slope_vs_inverse_epsilon": slope,
        "csv": config.csv_path,
    });
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn adaptive(config: &RunConfig, report: &mut Report) -> Result<()> {
    let p = prepared(config)?;
    let mut cfg = AdaptiveConfig::new(config.epsilon.expect("validated"), config.seed.expect("validated"));
    if let Some(v) = config.seed_m {
        cfg.seed_m = v;
    }
    if let Some(v) = config.seed_n {
        cfg.seed_n = v;
    }
    if let Some(v) = config.max_restarts {
        cfg.max_restarts = v;
    }
    if let Some(v) = config.growth_factor {
        cfg.growth_factor = v;
    }
    let (est, trace) = run_adaptive(&p.scaled, &cfg, config.mode)?;
    report.error_budget = to_value(&est.error_budget);
    report.trace = to_value(&trace);
    report.results = json!({
        "estimate": to_value(&est),
        "unscaled_estimate": p.scaled.unscaled_logdet(est.estimate),
        "scale": p.scaled.scale,
        "oracle_value": p.spectrum.alpha,
        "relative_error_vs_oracle": ((est.estimate - p.spectrum.alpha) / p.spectrum.alpha).abs(),
        "adaptive_config": to_value(&cfg),
    });
    Ok(())
}
