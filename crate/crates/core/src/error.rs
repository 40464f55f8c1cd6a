use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,

    #[error("dense size cap exceeded: {requested} qubits requested, cap is {cap}")]
    DenseCapExceeded { requested: usize, cap: usize },

    #[error("generator has order {actual}, expected {requested}")]
    WrongOrder { requested: usize, actual: usize },

    #[error("{0} is not a supported power of two")]
    NotPowerOfTwo(usize),

    #[error("length {0} is not a perfect square")]
    NotPerfectSquare(usize),

    #[error("cannot normalize an all-zero state")]
    ZeroNorm,

    #[error("array has no adjusted entries")]
    NotAdjusted,

    #[error("all generator rows are zero")]
    ZeroRows,

    #[error("cannot enumerate 2^{0} codewords")]
    TooManyRows(usize),

    #[error("no quasi-cyclic base yields a [{m},{n},{d}] code")]
    SearchExhausted { m: usize, n: usize, d: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("qubit index {qubit} out of range for a {num_qubits}-qubit register")]
    InvalidQubit { qubit: usize, num_qubits: usize },

    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),

    #[error("gate `{0}` is not supported by the stabilizer backend")]
    NonClifford(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("counts are empty")]
    EmptyCounts,

    #[error("mismatched cases in comparison: {0} vs {1}")]
    MismatchedCases(String, String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
