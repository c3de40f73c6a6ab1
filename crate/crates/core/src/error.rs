use thiserror::Error;

use crate::game::MoveError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Move(#[from] MoveError),

    #[error("state space estimate {estimate} exceeds cap {cap}")]
    StateCapExceeded { estimate: u128, cap: u128 },

    #[error("instance beyond the solver's representation: {0}")]
    SolverLimit(String),

    #[error("strategy setup failed: {0}")]
    Setup(String),

    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
