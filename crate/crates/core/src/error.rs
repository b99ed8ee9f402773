use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the q-matroid engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input (bad digits, wrong lengths, mismatched ambients).
    #[error("invalid input: {0}")]
    Input(String),

    /// A rank table violates one of the q-matroid rank axioms.
    #[error("axiom {axiom} violated: {witness}")]
    Axiom { axiom: &'static str, witness: String },

    /// A family of subspaces is not the flat lattice of a q-matroid.
    #[error("flat axiom {axiom} violated: {witness}")]
    FlatAxiom { axiom: &'static str, witness: String },

    /// Parameters are outside what an exhaustive routine is willing to handle.
    #[error("parameters too large: {0}")]
    TooLarge(String),

    /// Stored classification data failed an integrity check.
    #[error("integrity check failed for {path}: {reason}")]
    Integrity { path: PathBuf, reason: String },

    #[error("missing data: {0}")]
    Missing(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
