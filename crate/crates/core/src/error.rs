use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("base category mismatch: {0}")]
    BaseMismatch(String),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("not a monomorphism: {0}")]
    NotMono(String),
    #[error("not a Reedy fibration: {0}")]
    NotFibration(String),
    #[error("not fibrant: {0}")]
    NotFibrant(String),
    #[error("base must be direct: {0}")]
    NotDirect(String),
    #[error("truncation bound exceeded: {0}")]
    Truncation(String),
    #[error("non-composable letters: {0}")]
    NonComposable(String),
    #[error("model violation: {0}")]
    ModelViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
