use thiserror::Error;

/// Errors shared by the analytic, special-function and simulation paths.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a non-integrable singularity (unbounded path loss at r = 0).
    #[error("singularity: {0}")]
    Singularity(String),

    /// A series or integral does not converge for the given parameters.
    #[error("divergent: {0}")]
    Divergence(String),

    /// An iterative evaluation exhausted its term or subdivision budget.
    #[error("failed to converge: {0}")]
    NonConvergence(String),

    /// A lattice product could not be truncated within the allowed radius.
    #[error("lattice product truncation failed: {0}")]
    TruncationFailure(String),

    /// The scenario does not match any closed-form expression.
    #[error("no closed form for this case: {0}")]
    UnsupportedCase(String),

    /// An operation that requires a bounded path-loss model was given an
    /// unbounded one.
    #[error("unbounded path-loss model: {0}")]
    UnboundedModel(String),

    /// Scenario fields violate a model invariant.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
