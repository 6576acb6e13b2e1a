use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at x = {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not reach relative accuracy {tolerance:e} within {terms} terms")]
    NonConvergence { terms: usize, tolerance: f64 },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("singularity: {0}")]
    Singular(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("evaluation failed at node {index} ({point:?}): {message}")]
    NodeEvaluation {
        index: usize,
        point: Vec<f64>,
        message: String,
    },

    #[error("boundary data has {found} samples but the rule has {expected} nodes")]
    NodeCountMismatch { expected: usize, found: usize },

    #[error("source term check failed: {0}")]
    SourceCheck(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("rule cache: {0}")]
    Cache(String),
}
