use thiserror::Error;

/// Errors produced by the distribution models, the certifier and the lemma suite.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested variable has no finite variance proxy.
    #[error("not sub-Gaussian: {0}")]
    NotSubGaussian(String),

    /// A log-MGF callable returned a non-finite value.
    #[error("non-finite log-MGF value {value} at theta = {theta}")]
    Evaluation { theta: f64, value: f64 },

    #[error("quadrature failed to converge on [{lower}, {upper}] (error estimate {estimate:e})")]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
    },

    /// The bisection bracket does not straddle the optimal proxy.
    #[error("invalid bracket [{lo}, {hi}]: {reason}")]
    Bracket { lo: f64, hi: f64, reason: String },

    #[error("unknown function name {0:?}")]
    UnknownFunction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
