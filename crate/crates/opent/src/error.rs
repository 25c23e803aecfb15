//! Error type shared across the crate.

use thiserror::Error;

use crate::ascent::AscentState;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max |H - H^dag| = {max_dev:.3e}, tolerance {tol:.1e})")]
    NotHermitian { max_dev: f64, tol: f64 },

    #[error("matrix is not unitary (max |U^dag U - 1| = {max_dev:.3e}, tolerance {tol:.1e})")]
    NotUnitary { max_dev: f64, tol: f64 },

    #[error("gate is not dual-unitary (unitarity dev {unitary_dev:.3e}, dual dev {dual_dev:.3e})")]
    NotDualUnitary { unitary_dev: f64, dual_dev: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("gradient ascent hit the iteration cap ({iterations}); best E_p = {:.12}", best.ep)]
    AscentIterationCap {
        iterations: usize,
        best: Box<AscentState>,
    },

    #[error("LAPACK routine {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("malformed matrix file at byte offset {offset}: {message}")]
    MatrixFormat { offset: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for input/usage problems, 1 for
    /// compute-level failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Dimension(_)
            | Error::InvalidArgument(_)
            | Error::MatrixFormat { .. }
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 1,
        }
    }
}
