//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed text input. `pos` is a byte offset into the parsed string.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Operands live in algebras of different shapes, or an input does not
    /// fit the requested shape.
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    /// A generator or vertex index outside the admissible range.
    #[error("index out of range: {0}")]
    Index(String),

    /// A matching that is not a walled Brauer diagram.
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    /// Specialisation was asked to evaluate a parameter it has no value for.
    #[error("no value supplied for w{0}")]
    MissingOmega(u32),

    /// Rewriting exceeded its configured recursion budget.
    #[error("rewriting fuel exhausted (depth limit {0})")]
    FuelExhausted(usize),

    /// Cyclotomic parameters violate the admissibility recursion.
    #[error("parameters are not admissible: b_{index} = {witness}")]
    NonAdmissible { index: u32, witness: String },

    /// A linear system that was expected to be solvable is not.
    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    /// Cyclotomic data that cannot be used at all (bad degree, nonzero even
    /// parameter, missing seed, ...).
    #[error("invalid cyclotomic data: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::Shape {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
