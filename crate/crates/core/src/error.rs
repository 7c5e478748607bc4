use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    SizeCapExceeded { what: &'static str, value: u128, cap: u128 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element code {code} is out of range for a field of order {q}")]
    InvalidElement { code: u32, q: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("unsupported flat dimension {0}")]
    UnsupportedDim(usize),
    #[error("bad exponent: {0}")]
    BadExponent(String),
    #[error("empty set")]
    EmptySet,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("point ({0}, {1}) lies outside the unit square")]
    OutOfSquare(f64, f64),
    #[error("need at least {needed} data points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("cannot place {levels} disjoint nonempty levels in {points} points")]
    InfeasibleLevels { levels: usize, points: usize },
    #[error("exact scan over {tuples} tuples exceeds the budget {budget}")]
    TooLargeExact { tuples: u128, budget: u128 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
