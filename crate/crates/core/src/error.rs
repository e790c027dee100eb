//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by any ngrec operation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical routine (quadrature, maximizer, symplectic decomposition)
    /// failed to reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Block with (near-)zero norm; callers should discard the block.
    #[error("degenerate block: norm {0} below threshold")]
    DegenerateBlock(f64),

    #[error("ensemble validation failed: {0}")]
    EnsembleValidation(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("matrix construction failed: {0}; try a different seed")]
    Construction(String),

    /// Not enough postselected samples to fill a frame.
    #[error("data underrun: {0}")]
    DataUnderrun(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
