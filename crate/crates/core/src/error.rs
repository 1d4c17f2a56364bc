use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Fock truncation cannot hold the requested state to the required
    /// accuracy.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// A tolerance check failed during time integration.
    #[error("integration failed at t = {time}: {reason} (trace = {trace}, min eigenvalue = {min_eigenvalue:?})")]
    Integration {
        time: f64,
        reason: String,
        trace: f64,
        min_eigenvalue: Option<f64>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
