use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("{what}: n = {n} exceeds the cap of {max}")]
    CapExceeded { what: &'static str, n: usize, max: usize },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("bad family parameters: {0}")]
    BadParams(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("duplicate member {0}")]
    DuplicateMember(usize),
    #[error("invalid set: qubits {a} and {b} {reason}")]
    InvalidBSet { a: usize, b: usize, reason: &'static str },
    #[error("mask {mask:#b} is not a strict nonempty subset of {n} qubits")]
    BadBipartition { mask: usize, n: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands belong to different graphs")]
    GraphMismatch,
    #[error("noise parameter {0} outside [0, 1]")]
    NoiseOutOfRange(f64),
    #[error("not a state: {0}")]
    NotAState(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("operator does not detect the pure graph state (<G|W|G> = {0})")]
    NotDetecting(f64),
    #[error("catalog id {0} out of range 1..=19")]
    BadCatalogId(usize),
    #[error("missing certificates for decomposable verification")]
    MissingCertificates,
    #[error("LP solver: {0}")]
    Lp(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
