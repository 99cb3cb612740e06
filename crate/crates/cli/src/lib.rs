//! Command-line front end: symbol parsing, configuration, sweeps and reports.

pub mod config;
pub mod dsl;
pub mod report;
pub mod run;

use campanato_core::Error;
use thiserror::Error;

pub use config::RunConfig;
pub use dsl::{parse_complex, parse_symbol, ParseError};
pub use report::Report;
pub use run::execute;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 1 for bad input, 2 when the symbol is not a certified self-map,
    /// 3 when a numerical routine fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::NotSelfMap { .. } | Error::MissingCertificate => 2,
                Error::QuadratureNonConvergent { .. }
                | Error::RootFindingDiverged { .. }
                | Error::CoefficientRecoveryUnstable { .. }
                | Error::NonFiniteSample
                | Error::NearBoundaryImage { .. }
                | Error::DegenerateDenominator { .. } => 3,
                _ => 1,
            },
            CliError::Json(_) | CliError::Csv(_) | CliError::Io(_) => 1,
            CliError::Parse(_) | CliError::Usage(_) => 1,
        }
    }
}
