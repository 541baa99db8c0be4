use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}` in variable table")]
    DuplicateVariable(String),

    #[error("variable name collision: `{0}`")]
    VariableCollision(String),

    #[error("operands live in different polynomial rings")]
    RingMismatch,

    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,

    #[error("nilpotency not detected within {cap} applications")]
    CapExceeded { cap: usize },

    #[error("fundamental pair has no diagonal weights on the variables")]
    WeightsAbsent,

    #[error("input is not weight-homogeneous")]
    NotHomogeneous,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("Groebner basis has not been computed")]
    BasisAbsent,

    #[error("point is not on the relation locus: {0}")]
    OffLocus(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("malformed JSON input: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
