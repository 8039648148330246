use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error{}{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default(), key.as_ref().map(|k| format!(" (key `{k}`)")).unwrap_or_default())]
    Parse { line: Option<usize>, key: Option<String>, message: String },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Core(#[from] carleson_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed report: {0}")]
    Report(String),
}

/// Machine-readable form of an error, embedded in failed reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
    pub line: Option<usize>,
    pub key: Option<String>,
}

impl From<&LabError> for ErrorRecord {
    fn from(e: &LabError) -> Self {
        let (kind, line, key) = match e {
            LabError::Parse { line, key, .. } => ("parse", *line, key.clone()),
            LabError::InvalidGrid(_) => ("invalid-grid", None, None),
            LabError::Core(c) => (core_kind(c), None, None),
            LabError::Io(_) => ("io", None, None),
            LabError::Json(_) => ("json", None, None),
            LabError::Csv(_) => ("csv", None, None),
            LabError::Report(_) => ("report", None, None),
        };
        ErrorRecord { kind: kind.into(), message: e.to_string(), line, key }
    }
}

fn core_kind(e: &carleson_core::Error) -> &'static str {
    use carleson_core::Error as E;
    match e {
        E::UnknownSymbol(_) => "unknown-symbol",
        E::InvalidGrid(_) => "invalid-grid",
        E::NonConvergence { .. } => "non-convergence",
        E::QuadratureFailure(_) => "quadrature-failure",
        E::DegenerateRhs => "degenerate-rhs",
        E::PreconditionFailed(_) => "precondition-failed",
        E::RootAverageExceedsOne(_) => "root-average-exceeds-one",
        E::IncompatibleChain(_) | E::DomainMismatch { .. } => "incompatible-chain",
        _ => "core",
    }
}
