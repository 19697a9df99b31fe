use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("map is not well defined: image of domain relation {row} is not in the codomain relation lattice")]
    MapNotWellDefined { row: usize },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("elements of different fields: {left} and {right}")]
    MixedFields { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("group ring elements over different square-class groups (rank {0} vs rank {1})")]
    MixedOwners(usize, usize),

    #[error("coefficient {0} has a denominator that is not a power of two")]
    NonDyadic(String),

    #[error("non-integral coefficient where an integral one is required")]
    NonIntegral,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
