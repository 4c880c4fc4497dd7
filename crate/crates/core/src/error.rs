use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list {0:?} is not a bijection")]
    NotBijection(Vec<usize>),
    #[error("cycle {0:?} leaves the ground set or repeats an element")]
    BadCycle(Vec<usize>),
    #[error("malformed cycle notation `{0}`")]
    Syntax(String),
    #[error("permutations act on ground sets of different sizes ({0} vs {1})")]
    GroundSetMismatch(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("matrix marked symmetric but entry ({row},{col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("operation requires a symmetric matrix")]
    SymmetryRequired,
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("no symmetric scaling found within {iterations} iterations")]
    NormalizationFailed { iterations: usize },
    #[error("entry cannot be represented exactly in the scalar type")]
    Inexact,
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A parse failure in the matrix text format, 1-based line/column.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: cannot parse `{token}` as an exact finite rational")]
    BadEntry { line: usize, column: usize, token: String },
    #[error("line {line}: {message}")]
    Structure { line: usize, message: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("row and column index sets differ in size ({rows} vs {cols})")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("index sets must be nonempty, duplicate-free and in range")]
    BadIndexSet,
    #[error("symmetric mode needs a symmetric ambient matrix")]
    SymmetryRequired,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("symmetric tropical rank requires a symmetric matrix")]
    SymmetryRequired,
    #[error("brute-force oracle limited to matrices with both dimensions <= {limit}")]
    TooLarge { limit: usize },
    #[error("nonsingular {level}x{level} submatrix found above an all-singular level {below}")]
    MonotonicityViolated { level: usize, below: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("unknown catalog matrix `{0}`")]
    UnknownName(String),
    #[error("extension requires a symmetric matrix")]
    SymmetryRequired,
    #[error("need M < {min} and P > {max}, got P = {p}, M = {m}")]
    BadBounds { p: String, m: String, min: String, max: String },
    #[error("(r, n) = ({r}, {n}) is outside the region 4 < r < n or r = 4, n > 12")]
    OutsideRegion { r: usize, n: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A failed block decomposition, with a small submatrix showing why.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlocksError {
    #[error("input must be symmetric and normalized (row minima zero)")]
    NotNormalized,
    #[error("the zero matrix has no block decomposition")]
    ZeroMatrix,
    #[error("symmetric tropical rank is {0}, not 2")]
    WrongRank(usize),
    #[error("structure violation: {reason}; rows {rows:?}, columns {cols:?} (1-based, bordered matrix)")]
    StructureViolation { reason: String, rows: Vec<usize>, cols: Vec<usize> },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("operation undefined on the zero series")]
    ZeroSeries,
    #[error("discriminant vanishes to the working precision")]
    DegenerateDiscriminant,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("series matrix is not rectangular or is empty")]
    Shape,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("lift construction failed: {0}")]
    LiftFailed(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Blocks(#[from] BlocksError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
