use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("entourage is not symmetric")]
    NonSymmetricEntourage,

    #[error("budget exceeded building {what}: {size} vertices > cap {cap}")]
    BudgetExceeded { what: String, size: u128, cap: usize },

    #[error("not a chain: step {step} has no edge")]
    NotAChain { step: usize },

    #[error("chain endpoints do not match: {left_end} != {right_start}")]
    EndpointMismatch { left_end: usize, right_start: usize },

    #[error("no chain from {from} to {to}")]
    NoChain { from: usize, to: usize },

    #[error("invalid factor map: {0}")]
    InvalidFactorMap(String),

    #[error("base selection failed at step {step}")]
    SelectionFailed { step: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
