use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("linear coefficient is missing or not an invertible rational")]
    NonInvertibleLinearTerm,
    #[error("series does not have exact t-order 1")]
    NotOrderOne,
    #[error("constant term is not an invertible rational")]
    NotAUnit,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("assignment is missing m{0}")]
    IncompleteAssignment(usize),
    #[error("zero character")]
    ZeroCharacter,
    #[error("no admissible pivot variable")]
    NoPivot,
    #[error("not divisible (remainder in degree {degree})")]
    NotDivisible { degree: usize },
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("missing value at point {0}")]
    MissingPoint(String),
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("congruence {0} fails")]
    CongruenceFailure(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{0}")]
    UnresolvedSurfaceKind(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
