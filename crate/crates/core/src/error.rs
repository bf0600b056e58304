use thiserror::Error;

use crate::convex::lp::LpError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lp solver: {0}")]
    Lp(#[from] LpError),
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
