use thiserror::Error;

/// Errors raised by the machine, schemas, generators and attacks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no item named `{0}` in long-term memory")]
    MissingItem(String),

    #[error("challenge tape exhausted")]
    TapeExhausted,

    #[error("symbol `{symbol}` is outside the {alphabet} alphabet")]
    Domain { symbol: String, alphabet: String },

    #[error("unsupported modulus {0}")]
    UnsupportedModulus(u8),

    #[error("operand {0} is not a single digit")]
    NotADigit(u8),

    #[error("short-term memory overflow: {needed} chunks needed, capacity {capacity}")]
    Capacity { needed: usize, capacity: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("keyboard layout: {0}")]
    Layout(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("key has {found} digits, expected {expected}")]
    KeyLength { expected: usize, found: usize },

    #[error("search needs {required} steps, budget is {budget}")]
    Budget { required: f64, budget: f64 },

    #[error("need at least {required} samples, got {found}")]
    SampleSize { required: usize, found: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("inconsistent observations: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
