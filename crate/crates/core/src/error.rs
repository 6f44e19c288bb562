use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} needs {size} qubits, limit is {limit}")]
    Oversize {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),
    #[error("invalid qubit list: {0}")]
    InvalidQubits(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("formula is not multilinear: {0}")]
    NonMultilinear(String),
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("coset is empty")]
    EmptyCoset,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tree is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("prepare on qubit {qubit} which is not |0> (weight {weight:.3e})")]
    PrepOnNonzero { qubit: usize, weight: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable short code printed by the command-line tool.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Oversize { .. } => "oversize",
            Error::Dimension(_) => "dimension",
            Error::InvalidTree(_) => "invalid-tree",
            Error::NonUnitary(_) => "non-unitary",
            Error::InvalidQubits(_) => "invalid-qubits",
            Error::Syntax { .. } => "syntax",
            Error::NonMultilinear(_) => "non-multilinear",
            Error::ZeroFunction => "zero-function",
            Error::EmptyCoset => "empty-coset",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::NotOrthogonal(_) => "not-orthogonal",
            Error::PrepOnNonzero { .. } => "prep-on-nonzero",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_qubits(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::Oversize { what, size, limit })
    } else {
        Ok(())
    }
}
