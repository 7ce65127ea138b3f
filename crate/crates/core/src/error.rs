use thiserror::Error;

/// Errors raised by the laboratory.
///
/// `Input` and `Domain` are caller mistakes; the remaining variants report
/// that a mathematical construction did not go through.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("rejected input: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("point lies on the stable leaf x = 0")]
    StableLeaf,
    #[error("inadmissible word {0}")]
    Inadmissible(String),
    #[error("no periodic point for word {0}")]
    NoPeriodicPoint(String),
    #[error("depth cap {cap} exceeded: {detail}")]
    DepthCap { cap: usize, detail: String },
    #[error("construction failed: {0}")]
    Failed(String),
}

impl LabError {
    /// True for errors caused by bad input rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, LabError::Input(_) | LabError::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
