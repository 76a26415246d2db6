use thiserror::Error;

#[derive(Debug, Error)]
pub enum SptoError {
    #[error("group mismatch: {0:?} vs {1:?}")]
    GroupMismatch(Vec<u32>, Vec<u32>),
    #[error("element not in group: {0}")]
    NotInGroup(String),
    #[error("incomplete cocycle table: expected {expected} entries, got {got}")]
    IncompleteTable { expected: usize, got: usize },
    #[error(
        "not a projective representation: defect of ({0}, {1}) is not scalar (residual {2:e})"
    )]
    NotProjective(usize, usize, f64),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("edge too short: edge {0} has no interior player")]
    EdgeTooShort(&'static str),
    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),
    #[error("cycle requires even qubit count (two qubits per player), got {0}")]
    OddQubitCount(usize),
    #[error("contexts undefined: {0}")]
    ContextsUndefined(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not injective at this blocking; increase l (rank {rank} < {needed})")]
    NotInjective { rank: usize, needed: usize },
    #[error("tensor is not at the fixed point (unitarity residual {0:e})")]
    NotFixedPoint(f64),
    #[error("non-injective MPS: degenerate dominant transfer eigenvalue")]
    NonInjectiveMps,
    #[error("dense state cap exceeded: {needed} amplitudes > cap {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("unknown tensor: {0}")]
    UnknownTensor(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("overlapping operator supports at site {0}")]
    OverlappingSupport(usize),
    #[error("missing input for wire {0}")]
    MissingInput(usize),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("push-through validation failed (residual {0:e})")]
    PushThrough(f64),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SptoError>;
