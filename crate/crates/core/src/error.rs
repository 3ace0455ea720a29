use thiserror::Error;

/// Domain errors of the scalar algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuatError {
    #[error("quaternion components must be finite")]
    NonFinite,
    #[error("the zero quaternion has no inverse")]
    ZeroInverse,
    #[error("rotation axis must be a unit imaginary quaternion (norm {0})")]
    NonUnitAxis(f64),
    #[error("cannot parse quaternion: {0}")]
    Parse(String),
}

/// Shape errors of vectors and matrices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimensions must be positive")]
    Empty,
    #[error("entry count {found} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Quat(#[from] QuatError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("qubit index {index} outside 1..={n}")]
    InvalidQubit { index: usize, n: usize },
    #[error("target qubits must be distinct")]
    DuplicateTarget,
    #[error("gate `{gate}` acts on {arity} qubit(s) but {given} target(s) were given")]
    ArityMismatch { gate: String, arity: usize, given: usize },
    #[error("register norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error("register has zero norm")]
    ZeroNorm,
    #[error("substitution target for `{unit}` is not a unit quaternion")]
    NonUnitSubstitution { unit: char },
    #[error("{0} is not one of the eight unit phases +-1, +-i, +-j, +-k")]
    InvalidPhase(String),
    #[error("Pauli string length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("stabilizer generators {0} and {1} anticommute")]
    NonCommutingGenerators(usize, usize),
    #[error("invalid Pauli string `{0}`")]
    InvalidPauli(String),
    #[error("basis mapping assigns label `{0}` more than once")]
    NonInjectiveMapping(String),
    #[error("invalid H-qubit label `{0}`")]
    InvalidLabel(String),
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(String),
    #[error("fit needs at least 3 rows with p_L > 0, got {0}")]
    TooFewRows(usize),
    #[error("degenerate fit: the usable rows do not determine a line with nonzero slope")]
    DegenerateFit,
    #[error("suppression factor needs positive inputs, got {0} and {1}")]
    NonPositive(f64, f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
