//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the analytic engines and the simulator.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument fell outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A `SystemConfig` invariant was violated.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Floating-point assembly of a closed-form term failed; carries the
    /// SNR and a description of the offending term.
    #[error("numerical failure at rho = {rho}: {detail}")]
    Numerical { rho: f64, detail: String },

    /// The adaptive quadrature could not reach its requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
