//! Error type shared by the whole crate.
//!
//! Every variant carries a short stable code, so callers (and the CLI) can
//! distinguish failure classes without parsing messages.

use thiserror::Error;

use crate::closures::DeterminismReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("[io] {0}")]
    Io(#[from] std::io::Error),

    #[error("[json] {0}")]
    Json(#[from] serde_json::Error),

    /// The document parsed as JSON but does not match the model schema.
    #[error("[schema] {0}")]
    Schema(String),

    /// The call/return/simple (or input/output) partition is violated.
    #[error("[partition] {0}")]
    Partition(String),

    /// A reserved spelling (`_bot`, `_dia`, `_tau`) was used as an identifier.
    #[error("[reserved-id] `{0}` is a reserved spelling and cannot be used as an identifier")]
    ReservedId(String),

    /// A transition or configuration refers to an undeclared identifier.
    #[error("[unknown-id] unknown {kind} `{id}`{context}")]
    UnknownId {
        kind: &'static str,
        id: String,
        context: String,
    },

    /// A construction would mint a name that the input already uses.
    #[error("[name-collision] constructed name `{0}` collides with an existing identifier")]
    NameCollision(String),

    /// Two models that must share an alphabet do not.
    #[error("[alphabet-mismatch] {0}")]
    AlphabetMismatch(String),

    /// An operation requiring a deterministic model was given one that is not.
    #[error("[not-deterministic] {context}: {report}")]
    NotDeterministic {
        context: String,
        report: DeterminismReport,
    },

    /// A precondition other than determinism was violated.
    #[error("[precondition] {0}")]
    Precondition(String),

    /// A caller-facing usage error (out-of-range argument and the like).
    #[error("[usage] {0}")]
    Usage(String),

    /// A bounded search ran out of budget before reaching a verdict.
    #[error("[budget-exceeded] exploration budget of {budget} configurations exhausted; result is indeterminate")]
    BudgetExceeded { budget: usize },

    /// Internal consistency failure (a produced witness failed validation).
    #[error("[internal] {0}")]
    Internal(String),
}

impl Error {
    /// Stable short code identifying the error class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Schema(_) => "schema",
            Error::Partition(_) => "partition",
            Error::ReservedId(_) => "reserved-id",
            Error::UnknownId { .. } => "unknown-id",
            Error::NameCollision(_) => "name-collision",
            Error::AlphabetMismatch(_) => "alphabet-mismatch",
            Error::NotDeterministic { .. } => "not-deterministic",
            Error::Precondition(_) => "precondition",
            Error::Usage(_) => "usage",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::Internal(_) => "internal",
        }
    }

    pub(crate) fn unknown(kind: &'static str, id: &str, context: &str) -> Self {
        Error::UnknownId {
            kind,
            id: id.to_string(),
            context: if context.is_empty() {
                String::new()
            } else {
                format!(" ({context})")
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
