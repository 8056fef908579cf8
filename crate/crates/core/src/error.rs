use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large")]
    CharacteristicTooLarge(u64),
    #[error("unrecognised field `{0}` (expected Q or Fp)")]
    BadField(String),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("operation needs a finite field")]
    InfiniteField,
    #[error("operands live over different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("operands live over different alphabets")]
    AlphabetMismatch,
    #[error("no assignment for generator {0}")]
    MissingAssignment(String),
    #[error("generator `{0}` is not declared")]
    UnknownGenerator(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("degree bound {bound} is below relation degree {degree}")]
    BoundTooSmall { bound: usize, degree: usize },
    #[error("basis element `{0}` does not belong to {1}")]
    UnknownBasisElement(String, String),
    #[error("basis product {0} is not available in {1}")]
    ProductUnavailable(String, String),
    #[error("{0}")]
    Unsupported(String),
    #[error("structure law `{law}` fails at {witness}")]
    LawViolated { law: String, witness: String },
    #[error("level {0} is not available (tower built up to {1})")]
    LevelUnavailable(usize, usize),
    #[error("no member reaches target level {0}")]
    UnreachedLevel(usize),
    #[error("map composition mismatch: {0}")]
    CompositionMismatch(String),
    #[error("support of the family exceeds every available level (needs {0}, have {1})")]
    SupportOverflow(usize, usize),
    #[error("search space {size} exceeds the guard {limit}; partition the run or raise the guard")]
    GuardExceeded { size: f64, limit: f64 },
    #[error("point violates relation {0}")]
    InvalidPoint(String),
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
}
