use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown anyon label `{0}`")]
    UnknownLabel(String),

    #[error("invalid fusion model: {}", .0.join("; "))]
    InvalidModel(Vec<String>),

    #[error("model has no modular data")]
    NoModularData,

    #[error("malformed model spec: {0}")]
    ModelSpec(String),

    #[error("missing F-symbol for admissible tuple ({0})")]
    MissingFSymbol(String),

    #[error("missing R-symbol for admissible tuple ({0})")]
    MissingRSymbol(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("braid generator index {0} out of range 1..=5")]
    GeneratorRange(i64),

    #[error("parse error at token {position} (`{token}`): {reason}")]
    Parse {
        position: usize,
        token: String,
        reason: String,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("site {site} outside lattice of {sites} sites")]
    SiteRange { site: usize, sites: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
