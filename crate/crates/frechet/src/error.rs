use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("curve is not quasi-piecewise (>4d)-monotone: piece {piece} has displacement {displacement} <= {threshold}")]
    NotQuasiMonotone {
        piece: usize,
        displacement: f64,
        threshold: f64,
    },
    #[error("star-curve assembly failed: {0}")]
    StarAssembly(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
