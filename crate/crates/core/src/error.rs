//! Error type shared by every module in the crate.

/// Anything that can go wrong while building, loading, or solving a game.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two objects that must share dimensions do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A validated object was handed data violating one of its invariants.
    /// `field` names the offending input field or constructor argument.
    #[error("invalid {field}: {detail}")]
    Invariant { field: &'static str, detail: String },

    /// Eigendecomposition was requested for a matrix that is not Hermitian.
    #[error("matrix not Hermitian: max |M - M'| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// Malformed JSON. Carries serde's message, which includes line/column.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// Exact enumeration would visit more leaves than the node budget allows.
    #[error(
        "exact search space of {needed} encodings exceeds the budget of {budget}; \
         use branch-and-bound mode instead"
    )]
    NodeBudget { needed: u128, budget: u64 },

    /// An alternating-projection repair failed to reach feasibility. The
    /// trace holds the residual after each round.
    #[error(
        "constraint projection stalled at residual {residual:.3e} \
         (target {target:.1e}) after {rounds} rounds"
    )]
    ProjectionFailed {
        residual: f64,
        target: f64,
        rounds: usize,
        trace: Vec<f64>,
    },

    /// Remote-state preparation requires uniform outcome weights on the
    /// steering side.
    #[error(
        "steering outcome weights deviate from uniform by {deviation:.3e}, \
         beyond the allowed {tolerance:.1e}"
    )]
    NonUniformMarginals { deviation: f64, tolerance: f64 },

    /// A builder was asked for an object larger than its size cap.
    #[error("{what} of size {requested} exceeds the cap of {cap}")]
    SizeCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// Invalid solver or builder configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
