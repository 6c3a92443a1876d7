use thiserror::Error;

/// Everything that can go wrong across the crate, from input validation to
/// solver breakdown. CLI exit codes are derived from these: input-shaped
/// errors map to 1, solver-shaped errors to 3.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("degree must be at least 1")]
    InvalidDegree,

    #[error("invalid spatial dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("candidate set needs at least {required} points for this basis, got {got}")]
    TooFewCandidates { required: usize, got: usize },

    #[error("duplicate candidate point at indices {0} and {1}")]
    DuplicateCandidate(usize, usize),

    #[error("external point must lie outside the candidate set: {0}")]
    ExternalPointInside(String),

    #[error("nodes are not unisolvent for the basis: {0}")]
    NotUnisolvent(String),

    #[error("candidate matrix is rank deficient: rank {rank} < {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("design is degenerate: information matrix is singular")]
    DegenerateDesign,

    #[error("invalid design weights: {0}")]
    InvalidWeights(String),

    #[error("linear program is infeasible (phase-1 residual {0:.3e})")]
    Infeasible(f64),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration limit {0} reached")]
    IterationLimit(usize),

    #[error("grid has {points} nodes, exceeding the cap of {cap}")]
    GridCapExceeded { points: u128, cap: u128 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
