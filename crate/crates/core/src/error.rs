//! Error type shared by every operation in the crate.

use thiserror::Error;

/// Failure modes of tree construction, queries, and enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument that must be nonempty was empty.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// An index or length lies outside the structure it addresses.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A requested node, level, or witness does not exist.
    #[error("not found: {0}")]
    NotFound(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A search exhausted its depth or level budget before succeeding.
    #[error("horizon exceeded: {0}")]
    Horizon(String),

    /// A node that must belong to the ambient tree does not.
    #[error("not a member of the tree: {0}")]
    Membership(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// An enumeration did not stabilize within its ladder and the caller did
    /// not permit reporting partial counts.
    #[error("unsaturated enumeration: {0}")]
    Unsaturated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
