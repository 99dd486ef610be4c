use thiserror::Error;

/// Errors shared across the simulation, analysis, and search layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two objects that must live on the same number of spins do not.
    #[error("spin-count mismatch: expected {expected}, got {got}")]
    SpinCountMismatch { expected: usize, got: usize },

    /// Dimension mismatch between a vector and an operator or basis.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The requested computation exceeds a hard size cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A time-scan found no interior optimum inside its window.
    ///
    /// Carries the window edges and the figure of merit observed there so a
    /// caller can widen the window.
    #[error(
        "search window exhausted: no interior optimum in [{t_lo:.6e}, {t_hi:.6e}] \
         (f_q at edges: {f_lo:.6e}, {f_hi:.6e})"
    )]
    SearchWindowExhausted {
        t_lo: f64,
        t_hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A runtime consistency check failed (for instance a symmetry the
    /// dynamics must preserve).
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
