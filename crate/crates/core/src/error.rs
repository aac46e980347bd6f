use thiserror::Error;

use crate::graph::Side;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{side} index {index} out of range (side has {size} vertices)")]
    IndexOutOfRange { side: Side, index: usize, size: usize },
    #[error("{0} side of a bipartite graph must be nonempty")]
    EmptySide(Side),
    #[error("expected a {expected} set, got a {found} set")]
    SideMismatch { expected: Side, found: Side },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("part has zero measure")]
    ZeroMeasurePart,
    #[error("no vertex splits either part of the pair")]
    NoSplitter,
    #[error("refinement did not finish within {0} iterations")]
    IterationCapExceeded(usize),
    #[error("invalid epsilon {0}")]
    InvalidEpsilon(String),
    #[error("input set is empty")]
    EmptyInput,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("part with {size} vertices exceeds the exhaustive limit of {limit}")]
    PartTooLarge { size: usize, limit: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}
