use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("bad multiplicity {mult} on edge `{u}`-`{v}`")]
    BadMultiplicity { u: String, v: String, mult: i64 },
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("subdivision factor must be at least 1, got {0}")]
    BadK(i64),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("endpoints of a cut must differ (`{0}`)")]
    SameVertex(String),
    #[error("divisors live on different graphs")]
    HostMismatch,
    #[error("divisors are not linearly equivalent")]
    NotEquivalent,
    #[error("target divisor is not effective")]
    NotEffectiveTarget,
    #[error("divisor must be effective")]
    NotEffective,
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("rank must be positive, got {0}")]
    BadRank(i64),
    #[error("vertex set is not independent: `{0}` and `{1}` are adjacent")]
    NotIndependent(String, String),
    #[error("orientation incomplete: {0}")]
    IncompleteOrientation(String),
    #[error("unexpected debt pattern: {0}")]
    UnexpectedDebtPattern(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), msg: e.to_string() }
    }
}
