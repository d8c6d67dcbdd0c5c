use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate edge {0:?}")]
    DuplicateEdge([usize; 3]),
    #[error("triple {0:?} repeats a vertex")]
    RepeatedVertexInTriple([usize; 3]),
    #[error("vertex {index} out of range for {vertex_count} vertices")]
    IndexOutOfRange { index: usize, vertex_count: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{what} exceeds cap: {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("weight vector needs full support, coordinate {0} is zero")]
    Support(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("order {0} is not congruent to 1 or 3 mod 6")]
    WrongResidue(usize),
    #[error("unsupported order {t} for method {method}")]
    UnsupportedOrder { t: usize, method: &'static str },
    #[error("permutation is not a bijection on 0..{0}")]
    NotABijection(usize),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
