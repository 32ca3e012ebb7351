use thiserror::Error;

use crate::circuit::ParseError;
use crate::dd::{NodeRef, VarId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite complex value {re} + {im}i")]
    NonFinite { re: f64, im: f64 },

    #[error("variable {var} does not precede the top variables of its children")]
    OrderViolation { var: VarId },

    #[error("division by zero")]
    DivisionByZero,

    #[error("node {0:?} does not belong to this manager")]
    UnknownNode(NodeRef),

    #[error("operand kinds differ: {left} vs {right}")]
    KindMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("operation expects {expected}, got {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("qubit counts differ: {left} vs {right}")]
    QubitMismatch { left: u32, right: u32 },

    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: u32, n: u32 },

    #[error("duplicate qubit {0} in gate")]
    DuplicateQubit(u32),

    #[error("state vector has zero norm")]
    ZeroState,

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("malformed DD file at line {line}: {message}")]
    Format { line: usize, message: String },
}
