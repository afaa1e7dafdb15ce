use thiserror::Error;

use crate::parser::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid action name `{0}`: expected [a-z][a-z0-9_]*")]
    InvalidAction(String),

    #[error("`{term}` is not reachable from an initial process (offending subterm `{subterm}`)")]
    Unreachable { term: String, subterm: String },

    #[error("`{0}` is not a state of this transition system")]
    UnknownState(String),

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
