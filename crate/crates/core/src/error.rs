use thiserror::Error;

/// Errors produced by the constraint library.
///
/// Indices carried in error payloads are 1-based, matching the reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QiError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("triangle inequality fails at ({k},{m},{l})")]
    TriangleInequality { k: usize, m: usize, l: usize },

    #[error("reduced test requires zero self-delays, t[{index},{index}] is nonzero")]
    NonzeroSelfDelay { index: usize },

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("solver did not converge after {sweeps} sweeps (last change {last_change:e}, max violation {max_violation:e})")]
    NonConvergence {
        sweeps: usize,
        last_change: f64,
        max_violation: f64,
    },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("search space too large: {free_bits} free bits exceeds cap of {cap}")]
    SearchCap { free_bits: usize, cap: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = QiError> = std::result::Result<T, E>;
