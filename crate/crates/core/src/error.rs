//! Crate error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("field is in the wrong representation: expected {expected}, got {got}")]
    RepresentationMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("symbol produced a non-finite value at lattice node {node}")]
    NonFiniteSymbol { node: usize },

    #[error("non-finite field values detected ({context})")]
    NonFiniteField { context: String },

    #[error("invalid config value for `{key}`: {reason}")]
    InvalidConfig { key: String, reason: String },

    #[error("unknown config key `{key}`")]
    UnknownConfigKey { key: String },

    #[error("time {time} is beyond the wrap-around horizon {horizon} (= box_length/2)")]
    BeyondHorizon { time: f64, horizon: f64 },

    #[error("instability detected at t = {time}: relative mass growth {growth:.3e} exceeds 10%")]
    Instability { time: f64, growth: f64 },

    #[error("snapshot time {snapshot} does not match phase table time {table}")]
    TimeMismatch { snapshot: f64, table: f64 },

    #[error("phase unwrap ambiguity: step of {step:.3} rad exceeds pi; snapshots too sparse")]
    UnwrapAmbiguity { step: f64 },

    #[error("not enough snapshots: need {need}, have {have}")]
    InsufficientSnapshots { need: usize, have: usize },

    #[error("checkpoint format error: {0}")]
    Format(String),

    #[error("unsupported checkpoint version {0}")]
    UnsupportedVersion(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
