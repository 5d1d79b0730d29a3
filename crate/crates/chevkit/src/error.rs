//! Crate-wide error type, mapped onto process exit codes by the CLI.
//!
//! The contract: `Finding` means a verification check ran to completion and
//! the assertion it tests is *false* (exit 2); `Budget` means a configured
//! resource cap was hit before the check could decide (exit 3); `Usage`
//! covers malformed input — bad grammar, field mismatches, out-of-range
//! arguments (exit 4). Internal invariant violations panic instead: they
//! indicate a bug in this crate, not in the input or the claims under test.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChevError {
    /// A verification check completed and refuted its claim.
    #[error("finding at {anchor}: {detail}")]
    Finding { anchor: String, detail: String },

    /// A resource cap (degree, queue size, enumeration budget) was exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Malformed input: grammar, arguments, or field bookkeeping.
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, ChevError>;

impl ChevError {
    pub fn usage(msg: impl Into<String>) -> Self {
        ChevError::Usage(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        ChevError::Budget(msg.into())
    }

    pub fn finding(anchor: impl Into<String>, detail: impl Into<String>) -> Self {
        ChevError::Finding { anchor: anchor.into(), detail: detail.into() }
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            ChevError::Finding { .. } => 2,
            ChevError::Budget(_) => 3,
            ChevError::Usage(_) => 4,
        }
    }
}
