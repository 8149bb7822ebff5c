use std::io;

use thiserror::Error;

/// Everything that can go wrong while building, evaluating or certifying a network.
#[derive(Debug, Error)]
pub enum Error {
    /// A construction or check was asked for with parameters outside their valid range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Shapes do not line up (input width, layer chaining, output layer).
    #[error("structural error: {0}")]
    Structural(String),

    /// Training data is unusable, e.g. a non-finite target.
    #[error("data error: {0}")]
    Data(String),

    /// A value left the domain of a loss (cross-entropy log of 0, output outside [0, 1]).
    #[error("domain error at point {index}: {message}")]
    Domain { index: usize, message: String },

    /// A set, layer or probe stream is larger than the caller allowed.
    #[error("refused: {what} needs {required} items but the budget is {budget}")]
    Budget {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    /// `true` for errors caused by the environment rather than by the request.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Json(_) | Error::Csv(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
