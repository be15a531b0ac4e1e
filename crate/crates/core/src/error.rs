use thiserror::Error;

use crate::syntax::{PredSym, Var};

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unbound variable `{0}`")]
    UnboundVariable(Var),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(PredSym),
    #[error("formula is not closed; free variables: {0}")]
    NotClosed(String),
    #[error("formula must be quantifier-free: `{0}`")]
    NotQuantifierFree(String),
    #[error("formula is not in the ∃*∀* prefix class: {0}")]
    NotBsr(String),
    #[error("formula is not in prenex form")]
    NotPrenex,
    #[error("subformula `{0}` is not a test formula combination")]
    NotTestCombination(String),
    #[error("subformula `{0}` is not flat")]
    NotFlat(String),
    #[error("predicate `{0}` is not allowed in the source of this reduction")]
    PredicateNotAllowed(PredSym),
    #[error("location {0} is not in the universe")]
    LocationOutOfRange(usize),
    #[error("location {0} is not allocated")]
    Unallocated(usize),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
