use crate::oscillator::Regime;

/// Errors raised by the verification routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid oscillator parameters: omega0={omega0}, gamma={gamma} (need omega0 > 0, gamma >= 0)")]
    InvalidParams { omega0: f64, gamma: f64 },

    #[error("regime error: {operation} requires {required}, got {found:?}")]
    Regime { operation: &'static str, required: &'static str, found: Regime },

    #[error("degenerate initial condition: (x0, p0) = (0, 0) has no amplitude or phase")]
    Degenerate,

    #[error("H1 is singular at gamma = 0")]
    Singularity,

    #[error("phase-space origin: angle is undefined at (x, p) = (0, 0)")]
    Origin,

    #[error("convention mismatch: {0}")]
    Convention(String),

    #[error("non-finite value encountered at t={t}")]
    NonFinite { t: f64 },

    #[error("ambiguous unwrap at sample {index}: consecutive principal angles differ by pi")]
    AmbiguousUnwrap { index: usize },

    #[error("grid does not straddle the negative x-axis: {0}")]
    NoStraddle(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
