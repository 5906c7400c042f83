use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid polyhedral complex: {0}")]
    InvalidComplex(String),
    #[error("cycle is not balanced at {0} codimension-one face(s)")]
    Unbalanced(usize),
    #[error("operation needs a cycle of dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("operation needs a cycle of codimension {expected}, found {found}")]
    WrongCodimension { expected: usize, found: usize },
    #[error("cycle dimensions {0} + {1} are not complementary in ambient dimension {2}")]
    WrongDimensions(usize, usize, usize),
    #[error("block subset is empty")]
    EmptySubset,
    #[error("block index {0} out of range")]
    BadBlockIndex(usize),
    #[error("type vector mismatch: {0}")]
    TypeMismatch(String),
    #[error("divisor for block {0} is not positive")]
    NonPositiveDivisor(usize),
    #[error("result depends on displacement seed: {0}")]
    SeedDependence(String),
    #[error("no generic displacement found after {0} draws")]
    NonGeneric(u32),
    #[error("parse error: {0}")]
    Parse(String),
}
