//! Command pipelines, run configuration and the JSON report.

mod config;
mod pipeline;
mod report;

pub use config::{Command, RunConfig};
pub use pipeline::{estimate, prepare, EstimateOutcome, EstimateParams, PreparedMatrix, Sizing, StatSource};
pub use report::{run, Report, RunOutcome, SCHEMA_VERSION};
