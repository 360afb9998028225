use thiserror::Error;

/// Errors surfaced by the simulation and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric or structural argument is out of its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The graph itself is malformed (bad index, self-loop, duplicate edge)
    /// or fails a structural requirement such as connectivity.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// Inputs are valid but outside the domain where the requested check
    /// is meaningful.
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// An analytic moment does not exist for the requested order.
    #[error("divergent moment: {0}")]
    DivergentMoment(String),

    /// A Monte-Carlo estimate could not be formed (e.g. every replicate
    /// hit the event cap).
    #[error("estimation failed: {0}")]
    EstimationFailed(String),

    /// Internal bookkeeping disagreed with a ground-truth rescan.
    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed text input, with the 1-based offending line.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
