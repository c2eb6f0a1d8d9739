//! Error taxonomy shared across the crate.

/// Errors produced while constructing or evaluating approximants.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The target function returned a non-finite value during sampling.
    #[error("function returned non-finite value {value} at x = {x}")]
    Evaluation { x: f64, value: f64 },

    /// An evaluation point fell outside the host interval.
    #[error("x = {x} outside [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    /// A linear-algebra kernel failed or a residual bound was not met.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The denominator vanished exactly at the evaluation point.
    #[error("denominator vanished at x = {x}")]
    PoleAtEvaluation { x: f64 },

    /// A per-cell failure, tagged with the cell index it came from.
    #[error("cell {index}: {source}")]
    Cell {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the index of the partition cell it occurred in.
    pub fn in_cell(self, index: usize) -> Error {
        Error::Cell {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
