use thiserror::Error;

/// Errors produced by the solver and diagnostic layers.
///
/// Scalar payloads are stored as `f64` so the enum stays object-safe and
/// printable regardless of the working precision.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite data in {0}")]
    NonFinite(&'static str),

    #[error("multiplier is not finite at xi = {xi}")]
    MultiplierDomain { xi: f64 },

    #[error("negative-regularity norms are not supported (s = {s})")]
    NegativeRegularity { s: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("solution blew up at t = {time}")]
    BlowUp { time: f64 },

    #[error("trace snapshots are not uniformly spaced")]
    NonUniformTrace,

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("requested time t = {time} is not in the trace")]
    TimeNotInTrace { time: f64 },

    #[error("pair run aborted at t = {time}: {reason}")]
    AbortedPair { time: f64, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
