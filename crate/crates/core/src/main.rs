use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qspectral::app::{run, Command, RunConfig};
use qspectral::functions::SpectralFunction;
use qspectral::qpe::QpeMode;

#[derive(Parser)]
#[command(
    name = "qspectral",
    version,
    about = "Simulated quantum spectral sampling for log-determinants and spectral sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a matrix file is Hermitian and positive definite.
    Validate(MatrixArgs),
    /// Print the rescaled and original spectrum.
    Spectrum(MatrixArgs),
    /// Draw a sample string.
    Sample(SampleArgs),
    /// Estimate a spectral sum.
    Estimate(EstimateArgs),
    /// Evaluate the error budget for given spectrum statistics.
    Budget(BudgetArgs),
    /// Resource counts, or a sweep over target errors.
    Cost(CostArgs),
    /// Log-determinant with data-driven choice of m and N.
    Adaptive(AdaptiveArgs),
}

#[derive(Args)]
struct Common {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Upper bound on the largest eigenvalue.
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Lower bound on the smallest eigenvalue.
    #[arg(long)]
    lambda_min: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long)]
    m: u32,
    #[arg(long = "N")]
    samples: usize,
    #[arg(long, default_value = "full")]
    mode: QpeMode,
    #[arg(long)]
    seed: u64,
    /// Write the sample string as `j,k,m,mode` lines.
    #[arg(long)]
    dump_samples: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long = "N")]
    samples: Option<usize>,
    #[arg(long, default_value = "full")]
    mode: QpeMode,
    /// logdet, partition:β, entropy, trace or power:p
    #[arg(long, default_value = "logdet")]
    function: SpectralFunction<f64>,
    #[arg(long)]
    seed: u64,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Simulation accuracy for the resource report.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    dump_samples: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    kappa: f64,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long = "N")]
    samples: Option<usize>,
    /// Absolute deviation for the Chebyshev tail bound.
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CostArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long = "N")]
    samples: Option<usize>,
    #[arg(long)]
    eta: f64,
    /// Largest entry modulus of the rescaled matrix.
    #[arg(long)]
    a_max: Option<f64>,
    /// Cost of one oracle query.
    #[arg(long)]
    query_cost: Option<f64>,
    /// Comma-separated target errors; m and N then come from the budget.
    #[arg(long, value_delimiter = ',')]
    sweep_epsilon: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AdaptiveArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value = "floor")]
    mode: QpeMode,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    seed_m: Option<u32>,
    #[arg(long = "seed-N")]
    seed_n: Option<usize>,
    #[arg(long)]
    max_restarts: Option<usize>,
    #[arg(long)]
    growth_factor: Option<f64>,
}

fn with_matrix(command: Command, a: MatrixArgs) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.matrix_path = Some(a.matrix);
    c.lambda_max = a.lambda_max;
    c.lambda_min = a.lambda_min;
    c.output_path = a.common.output;
    c
}

fn config(cmd: Cmd) -> RunConfig {
    match cmd {
        Cmd::Validate(a) => with_matrix(Command::Validate, a),
        Cmd::Spectrum(a) => with_matrix(Command::Spectrum, a),
        Cmd::Sample(a) => {
            let mut c = with_matrix(Command::Sample, a.matrix);
            c.m = Some(a.m);
            c.samples = Some(a.samples);
            c.mode = a.mode;
            c.seed = Some(a.seed);
            c.dump_samples = a.dump_samples;
            c
        }
        Cmd::Estimate(a) => {
            let mut c = with_matrix(Command::Estimate, a.matrix);
            c.epsilon = a.epsilon;
            c.m = a.m;
            c.samples = a.samples;
            c.mode = a.mode;
            c.function = a.function;
            c.seed = Some(a.seed);
            c.mu = a.mu;
            c.delta = a.delta;
            c.kappa = a.kappa;
            c.eta = a.eta;
            c.dump_samples = a.dump_samples;
            c
        }
        Cmd::Budget(a) => {
            let mut c = RunConfig::new(Command::Budget);
            c.mu = Some(a.mu);
            c.delta = Some(a.delta);
            c.kappa = Some(a.kappa);
            c.epsilon = Some(a.epsilon);
            c.n = a.n;
            c.m = a.m;
            c.samples = a.samples;
            c.gamma = a.gamma;
            c.output_path = a.common.output;
            c
        }
        Cmd::Cost(a) => {
            let mut c = RunConfig::new(Command::Cost);
            c.n = Some(a.n);
            c.s = Some(a.s);
            c.m = a.m;
            c.samples = a.samples;
            c.eta = Some(a.eta);
            c.a_max = a.a_max;
            c.query_cost = a.query_cost;
            c.sweep_epsilon = a.sweep_epsilon;
            c.mu = a.mu;
            c.delta = a.delta;
            c.kappa = a.kappa;
            c.csv_path = a.csv;
            c.output_path = a.common.output;
            c
        }
        Cmd::Adaptive(a) => {
            let mut c = with_matrix(Command::Adaptive, a.matrix);
            c.epsilon = Some(a.epsilon);
            c.mode = a.mode;
            c.seed = Some(a.seed);
            c.seed_m = a.seed_m;
            c.seed_n = a.seed_n;
            c.max_restarts = a.max_restarts;
            c.growth_factor = a.growth_factor;
            c
        }
    }
}

fn main() -> ExitCode {
    let cfg = config(Cli::parse().command);
    let outcome = run(&cfg);
    if cfg.output_path.is_none() {
        print!("{}", outcome.report.to_json());
    } else if let Some(e) = &outcome.report.error {
        eprintln!("{}: {}", e.kind, e.message);
    }
    ExitCode::from(outcome.exit_code as u8)
}
