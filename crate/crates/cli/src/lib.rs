//! Batch front end: resolve a run configuration, execute one task and build
//! the JSON report plus a CSV summary.

pub mod config;
pub mod run;
pub mod suite;

pub use config::{Args, RunConfig, Task};
pub use run::{run, Outcome};
pub use suite::IdentityCheck;

use curvature::CurvatureError;
use discrete_fields::FieldError;
use tensor_core::TensorError;
use theorem_checker::CheckerError;
use thiserror::Error;
use weitzenboeck::WeitzenboeckError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => EXIT_PARSE,
            CliError::Capability(_) => EXIT_CAPABILITY,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            FieldError::Shape(_) | FieldError::Degenerate(_) => CliError::Parse(e.to_string()),
            FieldError::Curvature(c) => c.into(),
            _ => CliError::Capability(e.to_string()),
        }
    }
}

impl From<CurvatureError> for CliError {
    fn from(e: CurvatureError) -> Self {
        match e {
            CurvatureError::Parse(..) => CliError::Parse(e.to_string()),
            _ => CliError::Capability(e.to_string()),
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        CliError::Capability(e.to_string())
    }
}

impl From<WeitzenboeckError> for CliError {
    fn from(e: WeitzenboeckError) -> Self {
        CliError::Capability(e.to_string())
    }
}

impl From<CheckerError> for CliError {
    fn from(e: CheckerError) -> Self {
        match e {
            CheckerError::Field(f) => f.into(),
            CheckerError::Curvature(c) => c.into(),
            CheckerError::Precondition(_) => CliError::Parse(e.to_string()),
            _ => CliError::Capability(e.to_string()),
        }
    }
}
