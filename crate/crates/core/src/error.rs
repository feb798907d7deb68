//! Error types shared across the toolkit.

use thiserror::Error;

/// Unified error type for all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Qubit budget exceeded or other hard resource limit.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Qubit or element index out of range.
    #[error("index error: {0}")]
    Index(String),

    /// Array length or dimension mismatch.
    #[error("shape error: {0}")]
    Shape(String),

    /// Invalid configuration value or file.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Empty or otherwise unusable data.
    #[error("data error: {0}")]
    Data(String),

    /// Required CSV column absent.
    #[error("schema error: missing column `{0}`")]
    MissingColumn(String),

    /// Cell failed to parse as a number.
    #[error("parse error at row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// Feature column has zero variance; standardization is undefined.
    #[error("degenerate feature: column {0} has zero variance")]
    DegenerateFeature(usize),

    /// Training produced a non-finite loss.
    #[error("divergence error: non-finite loss at epoch {epoch}")]
    Divergence { epoch: usize },

    /// Model bundle is inconsistent with the requested operation.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// R-squared is undefined for a constant target vector.
    #[error("undefined variance: target vector is constant")]
    UndefinedVariance,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

impl Error {
    /// Machine-parsable error class, also used to pick the process exit code.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Capacity(_)
            | Error::Index(_)
            | Error::Shape(_)
            | Error::Configuration(_)
            | Error::Integrity(_) => "configuration",
            Error::Data(_)
            | Error::MissingColumn(_)
            | Error::Parse { .. }
            | Error::DegenerateFeature(_)
            | Error::UndefinedVariance
            | Error::Io(_)
            | Error::Serialization(_) => "data",
            Error::Divergence { .. } => "divergence",
        }
    }

    /// Process exit code for the CLI: 3 configuration, 4 data, 5 divergence.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            "configuration" => 3,
            "data" => 4,
            "divergence" => 5,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
