use thiserror::Error;

/// Errors raised by the numerical kernel, the operator-system algebra and the
/// parameter machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("every input matrix is numerically zero")]
    AllZeroInput,
    #[error("empty input sequence")]
    EmptyInput,
    #[error("subspace ambient is not square ({rows}x{cols})")]
    NonSquareAmbient { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not an orthogonal projection (deviation {deviation:.3e})")]
    NotProjection { deviation: f64 },
    #[error("projection {index} is zero")]
    ZeroProjection { index: usize },
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not an isometry (deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("vertex counts differ: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },
    #[error("instance too large: {what} = {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("set {index} of the family is empty")]
    EmptySet { index: usize },
    #[error("invalid classical channel: {0}")]
    InvalidClassicalChannel(String),
    #[error("invalid quantum channel: {0}")]
    InvalidChannel(String),
    #[error("too many Kraus operators: {count} exceeds {limit}")]
    TooManyKraus { count: usize, limit: usize },
    #[error("vector {index} is zero")]
    ZeroVector { index: usize },
    #[error("block sizes are inconsistent: {0}")]
    BlockSizeMismatch(String),
    #[error("matrix is not in F_t^+(G): {0}")]
    NotInF(String),
    #[error("matrix is not in H_t^+(G): {0}")]
    NotInH(String),
    #[error("degenerate perturbation bounds: {0}")]
    DegenerateABounds(String),
    #[error("SDP solver hit the iteration limit ({iterations}) with gap {gap:.3e}")]
    MaxIterations { iterations: usize, gap: f64 },
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("witness is not in the orthogonal complement (residual {residual:.3e})")]
    NotInPerp { residual: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
