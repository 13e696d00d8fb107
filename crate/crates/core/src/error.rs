use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("unsupported ambient dimension {0} (expected 2..=8)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("simplex vertices are affinely dependent (volume ratio {ratio:e})")]
    DegenerateSimplex { ratio: f64 },

    #[error("polytope is not full-dimensional: vertices span dimension {affine_dim} in R^{dim}")]
    Hollow { affine_dim: usize, dim: usize },

    #[error("inconsistent V/H representation: {0}")]
    Inconsistent(String),

    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("face is not part of this polytope's lattice")]
    NotAFace,

    #[error("malformed face lattice: {0}")]
    MalformedLattice(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
