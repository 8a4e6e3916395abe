use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable index {index} at position {pos} is out of range 1..={n}")]
    VariableIndex { index: usize, n: usize, pos: usize },

    #[error("operands live in different Weyl algebras (n = {0} and n = {1})")]
    VariableCount(usize, usize),

    #[error("the zero operator has no principal symbol")]
    ZeroSymbol,

    #[error("relation row {row} is not homogeneous: {detail}")]
    NotHomogeneous { row: usize, detail: String },

    #[error("relation row {row} has {got} components, expected {expected}")]
    RowLength {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("resolution has length {have}; at least {need} is required (re-resolve with --length {need})")]
    ResolutionTooShort { have: usize, need: usize },

    #[error("invalid degree window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("stability margin {margin} does not fit in a window of {width} degrees")]
    MarginTooLarge { margin: usize, width: usize },

    #[error("explicit model is invalid: {0}")]
    ModelInvalid(String),

    #[error("invalid job: {0}")]
    Job(String),

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Internal errors signal an engine bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
