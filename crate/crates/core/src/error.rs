use thiserror::Error;

/// Errors raised by the numerical kernel and the geometric layers above it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("field mismatch: cannot combine real and complex operands")]
    FieldMismatch,
    #[error("matrix is singular: Gram-Schmidt residual {residual:e} at column {column}")]
    Singular { column: usize, residual: f64 },
    #[error("matrix is not Hermitian within tolerance (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is rank deficient (smallest/largest singular value {0:e})")]
    RankDeficient(f64),
    #[error("iteration did not converge: {0}")]
    NoConvergence(&'static str),
    #[error("unsupported family or parameters: {0}")]
    Unsupported(String),
    #[error("subspace is not space-like (smallest form eigenvalue {0:e})")]
    NotSpaceLike(f64),
    #[error("point too close to the boundary for double precision (largest singular value {0})")]
    NearBoundary(f64),
    #[error("tangent matrix is not in the Cartan complement: {0}")]
    MalformedTangent(String),
    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),
    #[error("lattice is not orthonormal")]
    NonOrthonormalLattice,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("zero direction vector")]
    ZeroVector,
    #[error("direction is orthogonal to the lattice (infinite cut radius)")]
    DegenerateDirection,
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),
    #[error("point lies outside the normal chart of the base point")]
    OutsideChart,
}

pub type Result<T> = std::result::Result<T, Error>;
