use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::SpectralFunction;
use crate::qpe::QpeMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Validate,
    Spectrum,
    Sample,
    Estimate,
    Budget,
    Cost,
    Adaptive,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Validate => "validate",
            Command::Spectrum => "spectrum",
            Command::Sample => "sample",
            Command::Estimate => "estimate",
            Command::Budget => "budget",
            Command::Cost => "cost",
            Command::Adaptive => "adaptive",
        };
        f.write_str(s)
    }
}

/// Everything one invocation needs. Fields a command does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub matrix_path: Option<PathBuf>,
    pub lambda_max: Option<f64>,
    pub lambda_min: Option<f64>,
    pub epsilon: Option<f64>,
    pub m: Option<u32>,
    pub samples: Option<usize>,
    pub mode: QpeMode,
    pub function: SpectralFunction<f64>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub dump_samples: Option<PathBuf>,
    /// Supplied log-spectrum statistics; the dense oracle fills gaps.
    pub mu: Option<f64>,
    pub delta: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    pub n: Option<usize>,
    pub s: Option<usize>,
    pub eta: Option<f64>,
    pub a_max: Option<f64>,
    pub query_cost: Option<f64>,
    pub sweep_epsilon: Vec<f64>,
    pub csv_path: Option<PathBuf>,
    pub seed_m: Option<u32>,
    pub seed_n: Option<usize>,
    pub max_restarts: Option<usize>,
    pub growth_factor: Option<f64>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            matrix_path: None,
            lambda_max: None,
            lambda_min: None,
            epsilon: None,
            m: None,
            samples: None,
            mode: QpeMode::default(),
            function: SpectralFunction::Log,
            seed: None,
            output_path: None,
            dump_samples: None,
            mu: None,
            delta: None,
            kappa: None,
            gamma: None,
            n: None,
            s: None,
            eta: None,
            a_max: None,
            query_cost: None,
            sweep_epsilon: Vec::new(),
            csv_path: None,
            seed_m: None,
            seed_n: None,
            max_restarts: None,
            growth_factor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let missing = |what: &str| Err(Error::InvalidConfig(format!("{} requires {what}", self.command)));
        let needs_matrix = matches!(
            self.command,
            Command::Validate | Command::Spectrum | Command::Sample | Command::Estimate | Command::Adaptive
        );
        if needs_matrix && self.matrix_path.is_none() {
            return missing("--matrix");
        }
        let needs_seed = matches!(self.command, Command::Sample | Command::Estimate | Command::Adaptive);
        if needs_seed && self.seed.is_none() {
            return missing("--seed");
        }
        match self.command {
            Command::Sample if self.m.is_none() || self.samples.is_none() => missing("--m and --N"),
            Command::Estimate => {
                let fixed = self.m.is_some() && self.samples.is_some();
                if !fixed && self.epsilon.is_none() {
                    return missing("either --m and --N, or --epsilon");
                }
                if !fixed && (self.m.is_some() || self.samples.is_some()) {
                    return missing("both --m and --N when either is given");
                }
                Ok(())
            }
            Command::Adaptive if self.epsilon.is_none() => missing("--epsilon"),
            Command::Budget
                if self.mu.is_none() || self.delta.is_none() || self.kappa.is_none() || self.epsilon.is_none() =>
            {
                missing("--mu, --delta, --kappa and --epsilon")
            }
            Command::Cost => {
                if self.sweep_epsilon.is_empty() {
                    if self.n.is_none() || self.s.is_none() || self.m.is_none() || self.samples.is_none() {
                        return missing("--n, --s, --m and --N");
                    }
                } else if self.n.is_none()
                    || self.s.is_none()
                    || self.mu.is_none()
                    || self.delta.is_none()
                    || self.kappa.is_none()
                {
                    return missing("--n, --s, --mu, --delta and --kappa for a sweep");
                }
                if self.eta.is_none() {
                    return missing("--eta");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}
