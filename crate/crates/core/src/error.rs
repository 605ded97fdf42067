//! Error types.

use thiserror::Error;

/// A positional parse error.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("letter `{0}` is not in the terminal alphabet")]
    UnknownLetter(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("the trace does not end in an accepting configuration")]
    NotAccepting,
    #[error("the trace ends with the cursor at {0}, not at the root")]
    NotAtRoot(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0} needs an explicit transition list")]
    NotExplicit(&'static str),
    #[error("letter `{0}` collides with a generated hash letter")]
    LetterCollision(String),
    #[error("the input automaton has no recorded degree")]
    MissingDegree,
    #[error("the input automaton has no claimed restriction")]
    MissingRestriction,
    #[error("{0}")]
    InconsistentMeta(String),
    #[error("N = {n} exceeds the permutation cap {cap}")]
    TooManyPermutations { n: u32, cap: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("slices have different length bounds ({0} and {1})")]
    MaxLenMismatch(usize, usize),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("`{0}` is not a permutation")]
    BadPermutation(String),
}
