use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Composition `f∘g` needs `g(0) = 0`.
    #[error("composition undefined: inner series has nonzero constant term {0}")]
    CompositionUndefined(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// A mathematical precondition failed (vanishing moment, bad constant term, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A creation operator would push a word past the configured truncation rank.
    #[error("truncation overflow: {space} word would exceed rank {limit}")]
    Overflow { space: &'static str, limit: usize },

    #[error("insufficient data: need moments up to order {needed}, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("order mismatch: {0}")]
    OrderMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CompositionUndefined(_) => "composition_undefined",
            Error::NotInvertible(_) => "not_invertible",
            Error::Domain(_) => "domain",
            Error::Overflow { .. } => "overflow",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::OrderMismatch(_) => "order_mismatch",
            Error::Parse(_) => "parse",
        }
    }
}
