//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix has the wrong shape (non-square, odd dimension, mode-count mismatch).
    #[error("shape error: {0}")]
    Shape(String),

    /// Data fails a structural requirement (asymmetry, non-positive variance, bad record).
    #[error("data error: {0}")]
    Data(String),

    /// Mode index outside `0..n_modes`.
    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeIndex { index: usize, n_modes: usize },

    /// A parameter violates its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Numerical routine failed (eigen-solver non-convergence, pairing failure).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Root bracketing failed: no sign change of `ppt - 1` across the interval.
    #[error("no sign change in bracket [{lo}, {hi}]: f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// Preset name not recognised.
    #[error("unknown preset '{name}'; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    /// A sweep component failed at a specific grid point.
    #[error("at {axis} = {value}: {source}")]
    AtGridPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    /// Serialization / deserialization failure.
    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn at_grid_point(axis: &'static str, value: f64, source: Error) -> Self {
        Error::AtGridPoint {
            axis,
            value,
            source: Box::new(source),
        }
    }
}
