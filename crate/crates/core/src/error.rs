use thiserror::Error;

use crate::codes::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular over GF(2)")]
    SingularMatrix,

    #[error("linear system has no solution")]
    NoSolution,

    #[error("zero vector where a non-zero vector is required")]
    ZeroVector,

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("inner products differ between inputs {i} and {j} and their images")]
    IncompatibleInnerProducts { i: usize, j: usize },

    #[error("constraint vectors are linearly dependent")]
    DependentInputs,

    #[error("inconsistent symplectic basis input: {0}")]
    InconsistentInput(String),

    #[error("brute-force enumeration is limited to m <= 2 (got m = {m})")]
    TooLarge { m: usize },

    #[error("bad character {ch:?} at position {pos} in Pauli string")]
    BadCharacter { ch: char, pos: usize },

    #[error("bad sign prefix {0:?}")]
    BadSign(String),

    #[error("permutation factor Q is not invertible")]
    NonInvertibleQ,

    #[error("diagonal factor R is not symmetric")]
    NonSymmetricR,

    #[error("partial Hadamard width {t} exceeds {m} qubits")]
    PartialHadamardOutOfRange { t: usize, m: usize },

    #[error("qubit {qubit} out of range 1..={m}")]
    QubitOutOfRange { qubit: usize, m: usize },

    #[error("two-qubit gate acts twice on qubit {0}")]
    RepeatedQubit(usize),

    #[error("unknown builtin code {0:?}")]
    UnknownCode(String),

    #[error("invalid stabilizer code: {}", join_violations(.0))]
    InvalidCode(Vec<Violation>),

    #[error("inconsistent logical target: {0}")]
    InconsistentTarget(String),

    #[error("solution count {count} exceeds ceiling {ceiling}")]
    CeilingExceeded { count: String, ceiling: u64 },

    #[error("no Pauli correction fixes the signs")]
    NoCorrection,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
