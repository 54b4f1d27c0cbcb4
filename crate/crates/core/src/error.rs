use thiserror::Error;

/// Errors raised across the wave, solver and diagnostics layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller violated an operation's precondition (e.g. non-rarefaction data).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Invalid solver or experiment configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Nonpositive (or non-finite) density met during time integration.
    #[error("positivity failure: rho = {rho:e} at cell ({i}, {j}), t = {time}")]
    Positivity { i: usize, j: usize, time: f64, rho: f64 },

    /// Malformed checkpoint file.
    #[error("checkpoint format error: {0}")]
    Format(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
