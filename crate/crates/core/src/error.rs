use std::io;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("size limit exceeded: {what} = {value} (maximum {max})")]
    SizeLimit {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("unphysical correlators: {0}")]
    Unphysical(String),

    #[error("degenerate teleportation outcome: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported correlator strategy: {0}")]
    UnsupportedStrategy(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),

    #[error("no bracketing root: {0}")]
    NoBracket(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("least-squares fit is rank deficient: {0}")]
    RankDeficient(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::UnsupportedStrategy(_)
                | Error::Config(_)
                | Error::SizeLimit { .. }
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
