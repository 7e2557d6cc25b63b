use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("alpha = {alpha} is outside the admissible range of the {variant} divergence")]
    AlphaOutOfRange { alpha: f64, variant: &'static str },

    #[error("alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("ansatz component {0} has a zero vector")]
    ZeroVector(usize),

    #[error("invalid model parameters: {0}")]
    InvalidModel(String),

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("ground level is degenerate (gap {0:.3e})")]
    DegenerateGround(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the `ree` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidModel(_)
            | Error::AlphaOutOfRange { .. }
            | Error::NonPositiveAlpha(_)
            | Error::NonPositiveTemperature(_) => 1,
            Error::Io { .. } => 3,
            _ => 2,
        }
    }
}
