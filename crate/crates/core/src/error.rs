use thiserror::Error;

/// Errors produced by pattern, distribution, process, and entropy routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A probability vector failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A pattern string or label vector is not a restricted growth string.
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    /// A process specification failed validation.
    #[error("invalid process spec: {0}")]
    InvalidSpec(String),

    /// A transition structure has no unique stationary law.
    #[error("chain is not ergodic: {0}")]
    NonErgodic(String),

    /// A block length exceeds the exhaustive-enumeration cap.
    #[error("block length {n} exceeds enumeration cap {cap}")]
    EnumerationCap { n: usize, cap: usize },

    /// An exact computation would enumerate too many weighted sequences.
    #[error("exact enumeration of {count} sequences exceeds limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },

    /// An operation is not defined for the given process kind.
    #[error("unsupported for this process kind: {0}")]
    Unsupported(String),

    /// A numeric parameter is outside its domain.
    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// A requested numeric precision cannot be met within iteration limits.
    #[error("precision {requested:e} unachievable within iteration cap {cap}")]
    PrecisionUnachievable { requested: f64, cap: u64 },

    /// Two reports or laws that must describe the same source do not.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// Monte Carlo parameters are invalid (too few samples, zero workers, …).
    #[error("invalid estimation parameters: {0}")]
    InvalidParams(String),

    /// A rational literal such as `"3/4"` failed to parse.
    #[error("invalid rational literal {literal:?}: {reason}")]
    BadRational { literal: String, reason: String },

    /// Schema-level validation of a JSON document failed.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Underlying JSON failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
