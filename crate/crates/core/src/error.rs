use std::path::PathBuf;

use thiserror::Error;

use crate::table::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("channel 2 closed: Ek1 + e1 = {total} eV does not exceed e2 = {e2} eV")]
    ChannelClosed { total: f64, e2: f64 },

    #[error("{what} must be positive (got {value})")]
    NonPositive { what: &'static str, value: f64 },

    #[error("unknown product channel '{0}'")]
    UnknownChannel(String),

    #[error("angle index {index} out of range for a grid of {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("Schwartz ratio undefined for channel '{0}': a diagonal cross section vanishes")]
    DegenerateChannel(String),

    #[error("resonance and background specs disagree: {0}")]
    SpecMismatch(String),

    #[error("ratio denominator vanishes identically (trace zero)")]
    ZeroDenominator,

    #[error("invalid interference matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed at {locus}: {message}")]
    Malformed {
        path: PathBuf,
        locus: String,
        message: String,
    },

    #[error("table violates {} invariant(s); first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Validation(Vec<Violation>),

    #[error("at E = {energy} eV: {source}")]
    AtEnergy {
        energy: f64,
        #[source]
        source: Box<Error>,
    },
}
