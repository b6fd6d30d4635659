use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix dimension {0} exceeds the cap of {cap}", cap = crate::matrix::MAX_DIM)]
    DimensionTooLarge(usize),
    #[error("matrix is not invertible")]
    Singular,
    #[error("generator {0} is not invertible")]
    NonInvertibleGenerator(usize),
    #[error("matrix is not unipotent")]
    NonUnipotent,
    #[error("space of {size} points exceeds the cap of {cap} (raise --max-vectors)")]
    SpaceTooLarge { size: u128, cap: u64 },
    #[error("group has more than {cap} elements (raise --max-elements)")]
    GroupTooLarge { cap: u64 },
    #[error("subset space of {size} points exceeds the cap of {cap}")]
    TooManySubsets { size: u128, cap: u64 },
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    #[error("invalid parameters: {0}")]
    InvalidSpec(String),
    #[error("no invertible lift exists")]
    NoLift,
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("orbit profile mismatch for {name}: expected {expected}, got {actual}")]
    MismatchedProfile { name: String, expected: String, actual: String },
    #[error("data error: {0}")]
    Data(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}
