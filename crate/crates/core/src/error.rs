use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("invalid name `{0}`: expected [A-Za-z][A-Za-z0-9_]*")]
    InvalidName(String),
    #[error("edge `{edge}` refers to undeclared vertex `{vertex}`")]
    DanglingEdge { edge: String, vertex: String },
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("vertex set {0} is not hereditary")]
    NotHereditary(String),
    #[error("vertex set must be a nonempty proper subset of the vertices")]
    NotProperSubset,
    #[error("edges are not composable: r({0}) != s({1})")]
    NotComposable(String, String),
    #[error("ill-formed monomial: r(p) = {0} but r(q) = {1}")]
    RangeMismatch(String, String),
    #[error("invalid specialization: {0}")]
    InvalidSpecialization(String),
    #[error("operands belong to different algebras (graph, specialization or field differ)")]
    AlgebraMismatch,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("invalid field `{0}`: expected `q` or `fp:<prime>`")]
    InvalidField(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid precision `{0}`: expected a nonnegative integer, `a/b` or `inf`")]
    InvalidPrecision(String),
    #[error("requested congruence level {requested} exceeds available precision {available}")]
    InsufficientPrecision { requested: String, available: String },
    #[error("an infinite sum cannot be evaluated exactly; pass a finite precision")]
    InfiniteSum,
    #[error("expansion exceeds the term limit of {0}")]
    TooManyTerms(usize),
    #[error("precision solver did not converge for target {0}")]
    PrecisionDiverged(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
