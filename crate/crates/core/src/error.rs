use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Family or configuration parameters violate their constraints.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// An iterative procedure did not reach its tolerance.
    #[error("numerical error: {what} (partial estimate {partial:e})")]
    Numerical { what: String, partial: f64 },
    /// The operation exists in general but not for this family or regime.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Inputs that should describe the same object disagree.
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    /// A statistical estimate is not trustworthy.
    #[error("quality error: {what} (estimate {partial:e})")]
    Quality { what: String, partial: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
