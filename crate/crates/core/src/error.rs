use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("coordinate {coord} out of range 1..={n}")]
    CoordinateOutOfRange { coord: usize, n: usize },

    #[error("unsupported length {0} (supported: 1..=1024)")]
    UnsupportedLength(usize),

    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge { what: &'static str, size: String, cap: String },

    #[error("code needs at least 2 codewords")]
    TooFewCodewords,

    #[error("code does not contain the all-zero word")]
    MissingZero,

    #[error("input code is not perfect: {0}")]
    NotPerfect(String),

    #[error("word is not a codeword")]
    NotMember,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("descriptor syntax error at byte {pos}: {msg}")]
    Descriptor { pos: usize, msg: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unclassifiable triple {0:?}")]
    Unclassifiable([usize; 3]),

    #[error("unknown reference code id {0}")]
    UnknownCodeId(u32),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("condition {name} fails: {detail}")]
    ConditionFailed { name: &'static str, detail: String },

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
