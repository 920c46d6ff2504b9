//! Error type shared by all numeric modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum EgError {
    /// Input outside the operation's domain. The message names the
    /// offending argument or factor.
    #[error("domain error: {0}")]
    Domain(String),

    /// The truncation policy's `max_terms` was exhausted, or a series
    /// envelope was violated persistently. No partial value is returned.
    #[error("convergence failure after {terms} terms: {context}")]
    Convergence { terms: usize, context: String },

    /// Evaluation requested exactly at a pole.
    #[error("pole of order {order} at {location}")]
    Pole { order: u32, location: String },
}

pub type EgResult<T> = Result<T, EgError>;

impl EgError {
    pub fn domain(msg: impl Into<String>) -> Self {
        EgError::Domain(msg.into())
    }
}
