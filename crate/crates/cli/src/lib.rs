//! Library half of the `secrecy` command: config handling, metric evaluation,
//! parameter sweeps, Monte-Carlo validation reports and sample dumps.
//!
//! Every output starts with one `# {json}` manifest line followed by CSV.

pub mod manifest;
pub mod sample;
pub mod settings;
pub mod sweep;
pub mod validate;

use hybrid_secrecy::config::ConfigError;

pub use manifest::Manifest;
pub use settings::{load_settings, parse_metric, run_eval, EvalRow, Settings};
pub use sweep::{run_sweep, SweepSpec};
pub use validate::{run_validate, ValidateReport};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Bad arguments, unreadable or invalid config, refused preconditions.
    pub const USAGE: i32 = 1;
    /// Numerical-integrity or convergence failure.
    pub const NUMERICAL: i32 = 2;
    /// `validate` found a metric or distribution outside its acceptance band.
    pub const VALIDATION_FAILED: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] hybrid_secrecy::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => exit::NUMERICAL,
            _ => exit::USAGE,
        }
    }

    /// Machine-readable failure category.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
            CliError::Model(e) if e.is_numerical() => "numerical",
            CliError::Model(hybrid_secrecy::Error::Unsupported(_)) => "unsupported",
            CliError::Model(_) => "parameter",
            CliError::Io(_) | CliError::Csv(_) => "io",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Shortest round-trip decimal; scientific notation outside `[1e-4, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
