use std::path::PathBuf;

use thiserror::Error;

use crate::model::ModelError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("document has no content")]
    EmptyDocument,
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("unsupported modality: {0}")]
    UnsupportedModality(String),
    #[error("vector dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("index has no entries")]
    EmptyIndex,
    #[error("index not found: {}", .0.display())]
    IndexNotFound(PathBuf),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt index: {0}")]
    CorruptIndex(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no scenario names could be parsed from the catalog reply")]
    EmptyCatalog,
    #[error("intent could not be resolved to a catalog scenario (model replied {reply:?})")]
    UnresolvableIntent { reply: String },
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("sample has no retrieved contexts")]
    MissingContexts,
    #[error("answer has no claims to check")]
    NoClaims,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code, shared by the HTTP API, the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyDocument => "empty_document",
            Error::BadParams(_) => "bad_params",
            Error::UnsupportedModality(_) => "unsupported_modality",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::EmptyIndex => "empty_index",
            Error::IndexNotFound(_) => "index_not_found",
            Error::Io(_) => "io_error",
            Error::CorruptIndex(_) => "corrupt_index",
            Error::Model(_) => "model_error",
            Error::EmptyCatalog => "empty_catalog",
            Error::UnresolvableIntent { .. } => "unresolvable_intent",
            Error::SchemaViolation(_) => "schema_violation",
            Error::MissingContexts => "missing_contexts",
            Error::NoClaims => "no_claims",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}
