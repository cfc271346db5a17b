use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the geometry, corrector, solver, analysis and harness layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function (e.g. `z` outside `[0, h]`).
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid parameters or configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// A chart or metric degenerates (non-positive metric determinant).
    #[error("geometry error: {0}")]
    Geometry(String),
    /// Input data violates a precondition (wall impermeability, divergence, alignment).
    #[error("input error: {0}")]
    Input(String),
    /// The time step violates the stability bound.
    #[error("step-size error: {0}")]
    StepSize(String),
    /// The solution grew beyond the blow-up threshold.
    #[error("blow-up detected: {0}")]
    BlowUp(String),
    /// A rate fit could not be formed.
    #[error("fit error: {0}")]
    Fit(String),
    /// The operation is not available for this geometry.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A ratio or norm is undefined for the given input (0/0 guards).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A linear system turned out singular.
    #[error("singular system: {0}")]
    Singular(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error at {path}: {source}")]
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
}

pub type Result<T> = std::result::Result<T, Error>;
