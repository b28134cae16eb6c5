//! Exact-arithmetic engine for the persistent homology transform of a
//! geometric simplicial complex.
//!
//! The sphere of directions is cut into cells on which the sublevel-set
//! filtration is combinatorially constant. Per cell, the engine computes a
//! persistence diagram as an integral charge function on the interval poset
//! of the cell's height order, and face relations between cells induce
//! charge-preserving pushforwards between diagrams. Everything is computed
//! over arbitrary-precision rationals; no floating point enters any
//! computation or serialized artifact.

pub mod arrangement;
pub mod complex;
pub mod feasibility;
pub mod filtration;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod rational;
pub mod render;
pub mod transform;

use thiserror::Error;

/// Errors surfaced by engine operations. Pure combinatorial queries return
/// plain values; constructors and operations with preconditions return
/// `Result<_, Error>`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("simplex {0:?} lists vertex {1} more than once")]
    DuplicateVertex(Vec<usize>, usize),
    #[error("empty simplex is not allowed")]
    EmptySimplex,
    #[error("vertex {0} has no coordinates")]
    MissingCoordinates(usize),
    #[error("vertex {0} has {1} coordinates, expected ambient dimension {2}")]
    CoordinateLength(usize, usize, usize),
    #[error("vertices {0} and {1} share the same coordinates")]
    CoincidentVertices(usize, usize),
    #[error("ambient dimension must be at least 1")]
    AmbientDimZero,
    #[error("vertex {0} is not a vertex of the complex")]
    UnknownVertex(usize),
    #[error("direction vector has {0} coordinates, expected {1}")]
    DirectionLength(usize, usize),
    #[error("the zero vector is not a direction")]
    ZeroDirection,
    #[error("affine dimension of the empty set is undefined")]
    EmptyVertexSet,
    #[error("embeddings live on different complexes or ambient dimensions")]
    MismatchedEmbeddings,
    #[error(
    "arrangement is not essential (defect {defect}); augmenting with {} extra sphere(s) fixes it",
    defect + 1
  )]
    NotEssential { defect: usize },
    #[error("arrangement is already essential; nothing to augment")]
    AlreadyEssential,
    #[error("partition does not cover the vertex set or repeats a vertex")]
    MalformedPartition,
    #[error("augmentation sign pattern has {0} entries, expected {1}")]
    PatternLength(usize, usize),
    #[error("no cell carries the sign vector {0}")]
    UnknownSignVector(String),
    #[error("cells {0} and {1} are not related by the face order")]
    NotAFace(String, String),
    #[error("cell index {0} is out of range")]
    UnknownCell(usize),
    #[error("homological dimension {0} was not computed for this transform")]
    UnknownDimension(usize),
    #[error("map is not monotone or does not preserve bottom and top")]
    NotBoundedMonotone,
    #[error("map endpoints do not match the posets it is applied to")]
    PosetMismatch,
    #[error("chain must have at least one element")]
    EmptyChain,
    #[error("{0} is not a prime field order")]
    NotPrime(u64),
    #[error("field order {0} is too large; orders up to 2^31 are supported")]
    FieldTooLarge(u64),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("transform file is inconsistent: {0}")]
    BadTransformFile(String),
    #[error("complex file is inconsistent: {0}")]
    BadComplexFile(String),
    #[error("sphere rendering needs a one-dimensional arrangement (ambient dimension 2)")]
    NotRenderable,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
