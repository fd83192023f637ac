use std::path::PathBuf;

use thiserror::Error;

use crate::linop::Shape;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected length {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("operator shape mismatch in {context}: {left} is incompatible with {right}")]
    ShapeMismatch {
        context: &'static str,
        left: Shape,
        right: Shape,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} does not support entrywise absolute-power sums")]
    Unsupported(&'static str),

    #[error(
        "step sizes too large: tau*sigma*|K|^2 = {product:.6} exceeds 1 \
         (tau = {tau}, sigma = {sigma}, estimated |K| = {norm:.6})"
    )]
    StepTooLarge {
        tau: f64,
        sigma: f64,
        norm: f64,
        product: f64,
    },

    #[error("non-finite value in {what} at iteration {iteration}")]
    NonFinite {
        what: &'static str,
        iteration: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
