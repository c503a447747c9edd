use thiserror::Error;

/// Errors raised by the special-function, kernel and quadrature layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {reason}")]
    Domain { func: &'static str, reason: String },

    #[error("pole of {func} at {x}")]
    Pole { func: &'static str, x: f64 },

    #[error("{func}: intermediate scaling exceeds the representable range")]
    Overflow { func: &'static str },

    #[error(
        "series did not converge within {max_terms} terms (z = {z}); raise max_terms or lower z"
    )]
    NonConvergence { max_terms: usize, z: f64 },

    #[error("jet evaluation too close to w = ±1 (w = {w}, guard = {guard})")]
    JetSingularity { w: f64, guard: f64 },

    #[error("no closed form available for a = {a}, m = {m}")]
    NoClosedForm { a: f64, m: u32 },

    #[error("quadrature check failed: {0}")]
    Quadrature(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(func: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        func,
        reason: reason.into(),
    }
}
