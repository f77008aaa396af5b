//! Three-valued outcome for semi-decidable properties.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case", deny_unknown_fields)]
pub enum Verdict<P, W> {
    Proven { certificate: P },
    Refuted { witness: W },
    Unknown { depth: usize, reason: String },
}

impl<P, W> Verdict<P, W> {
    pub fn unknown(depth: usize, reason: impl Into<String>) -> Self {
        Verdict::Unknown { depth, reason: reason.into() }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Proven { .. } => "proven",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn proven(&self) -> Option<&P> {
        match self {
            Verdict::Proven { certificate } => Some(certificate),
            _ => None,
        }
    }

    pub fn refuted(&self) -> Option<&W> {
        match self {
            Verdict::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Placeholder payload for verdicts whose conclusion is recomputed on checking.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoPayload {}

/// Error raised when a stored certificate fails re-validation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct CertError {
    pub path: String,
    pub message: String,
}

impl CertError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        CertError { path: path.into(), message: message.into() }
    }

    pub fn under(mut self, prefix: &str) -> Self {
        self.path = format!("{prefix}.{}", self.path);
        self
    }
}

/// `Err(CertError)` unless `cond` holds.
pub fn ensure(cond: bool, path: &str, message: impl FnOnce() -> String) -> Result<(), CertError> {
    if cond {
        Ok(())
    } else {
        Err(CertError::new(path, message()))
    }
}
