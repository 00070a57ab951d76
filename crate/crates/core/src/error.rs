use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    /// The inverse-square coupling of channel `channel` is too attractive:
    /// the radicand of the Bessel index is negative.
    #[error("fall to the center in channel m = {channel}: radicand {radicand} < 0")]
    FallToCenter { channel: f64, radicand: f64 },

    #[error("point lies on the defect axis")]
    OnAxis,

    #[error("truncation tail {estimate:e} exceeds tolerance {tolerance:e} ({what})")]
    TailTooLarge {
        what: &'static str,
        estimate: f64,
        tolerance: f64,
    },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("grid too coarse: Richardson error estimate {estimate:e} exceeds {limit:e}")]
    GridTooCoarse { estimate: f64, limit: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
