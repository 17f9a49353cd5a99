use thiserror::Error;

use crate::kb::Diagnostic;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema violation: {0}")]
    Schema(String),

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("typicality operator not allowed here: {0}")]
    TypicalityNesting(String),

    #[error("weight `{value}` has more than {precision} decimal places or does not fit")]
    WeightPrecision { value: String, precision: u32 },

    #[error("resolution n must be at least 1 (got {0})")]
    InvalidResolution(i64),

    #[error("malformed decimal `{0}`")]
    MalformedDecimal(String),

    #[error("knowledge base is invalid ({} diagnostic(s))", .0.len())]
    Invalid(Vec<Diagnostic>),

    #[error("`{0}` is not a distinguished concept")]
    NotDistinguished(String),

    #[error("search exceeded the node cap of {cap}")]
    ResourceCap { cap: u64 },

    #[error("typicality dependencies are cyclic through `{0}`")]
    CyclicDependency(String),

    #[error("concept `{0}` is neither an input nor distinguished")]
    NotFeedforward(String),

    #[error("input valuation does not match the input concepts: {0}")]
    InputMismatch(String),

    #[error("network: {0}")]
    Network(String),

    #[error("query syntax: {0}")]
    QuerySyntax(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("threshold for level {level} could not be isolated")]
    ThresholdPrecision { level: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Schema(_) => "schema",
            Error::UnknownAtom(_) => "unknown-atom",
            Error::TypicalityNesting(_) => "typicality-nesting",
            Error::WeightPrecision { .. } => "weight-precision",
            Error::InvalidResolution(_) => "invalid-resolution",
            Error::MalformedDecimal(_) => "malformed-decimal",
            Error::Invalid(_) => "validation",
            Error::NotDistinguished(_) => "not-distinguished",
            Error::ResourceCap { .. } => "resource-cap",
            Error::CyclicDependency(_) => "cyclic-dependency",
            Error::NotFeedforward(_) => "not-feedforward",
            Error::InputMismatch(_) => "input-mismatch",
            Error::Network(_) => "network",
            Error::QuerySyntax(_) => "query-syntax",
            Error::Unsupported(_) => "unsupported",
            Error::ThresholdPrecision { .. } => "threshold-precision",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
