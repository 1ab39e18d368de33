use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate relation for {0}")]
    DuplicateRelation(String),
    #[error("parameter {name}={value} outside declared range {range}")]
    ParamOutOfRange { name: String, value: i64, range: String },
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("presentation defines a group of order {found}, expected {expected}")]
    OrderMismatch { expected: String, found: String },
    #[error("group order exceeds p^{0}")]
    OrderBound(usize),
    #[error("invalid pc presentation: {0}")]
    InvalidPc(String),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("{0}")]
    NotAbelian(String),
    #[error("search budget exhausted after {count} steps; best bound {best_bound:?}")]
    BudgetExhausted { count: u64, best_bound: Option<u64> },
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
