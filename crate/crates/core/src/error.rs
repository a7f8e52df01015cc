use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a permutation of [{n}]: {word:?}")]
    NotAPermutation { n: usize, word: Vec<usize> },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("pattern of size {pattern} is longer than host of size {host}")]
    PatternTooLong { pattern: usize, host: usize },

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("label {label} out of range 1..={bound}")]
    LabelOutOfRange { label: usize, bound: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("size {n} exceeds the cost guard ({max})")]
    CostGuard { n: usize, max: usize },

    /// The determinantal formula is only valid for 1324- and 2143-avoiding permutations.
    #[error("{v} contains the pattern {pattern}")]
    PatternPrecondition { v: String, pattern: String },

    #[error("matrix is not {k}-positive")]
    PositivityPrecondition { k: usize },

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for the hypothesis-not-met family, as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::PatternPrecondition { .. }
                | Error::PositivityPrecondition { .. }
                | Error::Precondition(_)
        )
    }
}
