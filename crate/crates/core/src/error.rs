use thiserror::Error;

use crate::scheme::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A counting request reached a class the scheme does not describe.
    #[error("scheme integrity error: {0}")]
    Integrity(String),

    #[error("scheme is not well-formed: {}", join_violations(.0))]
    Validation(Vec<Violation>),

    #[error("not enough terms: need at least {required}, got {available}")]
    InsufficientTerms { required: usize, available: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
