use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("out of range: {0}")]
    Range(String),

    #[error("coefficient {index} times {index}! is not a non-negative integer")]
    NonIntegral { index: usize },

    #[error("composition requires constant coefficient 1, found {0}")]
    CompositionDomain(String),

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("domain size mismatch: {0}")]
    DomainMismatch(String),

    #[error("capacity exceeded: {what} needs {needed}, budget is {budget}")]
    Capacity {
        what: &'static str,
        needed: String,
        budget: u64,
    },

    #[error("graph has no vertex colouring")]
    MissingColors,

    #[error("flip spec has {spec} parts but the paths have {expected} positions")]
    FlipMismatch { spec: usize, expected: usize },

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

impl Error {
    pub(crate) fn capacity(what: &'static str, needed: impl ToString, budget: u64) -> Self {
        Error::Capacity {
            what,
            needed: needed.to_string(),
            budget,
        }
    }

    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    /// True for budget exhaustion, as opposed to malformed input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
