//! Library error type.

use thiserror::Error;

/// Errors produced by configuration loading and the numerical operations.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("missing field: {0}")]
    MissingField(String),

    #[error("non-positive constant: {0}")]
    NonPositiveConstant(String),

    #[error("duplicate mode key: {0}")]
    DuplicateMode(String),

    #[error("unknown mode: {0}")]
    UnknownMode(String),

    #[error("position outside domain: {0}")]
    OutOfDomain(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("no trap: {0}")]
    NoTrap(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("same-sign detunings: no radial trap possible")]
    SameSignDetunings,
}

pub type Result<T> = std::result::Result<T, CoreError>;
