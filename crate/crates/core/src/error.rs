use std::io;

use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty graph")]
    EmptyGraph,

    #[error("vertex {id} out of bounds (graph has {num_vertices} vertices)")]
    VertexOutOfBounds { id: u64, num_vertices: usize },

    #[error("empty seed set")]
    EmptySeedSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {0} has zero degree, D-mode absorption rate would be 0")]
    ZeroDegree(VertexId),

    #[error("non-positive absorption rate {value} at vertex {vertex}")]
    NonPositiveLambda { vertex: VertexId, value: f64 },

    #[error("oracle size exceeded: {vertices} vertices, cap is {cap}")]
    OracleSizeExceeded { vertices: usize, cap: usize },

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dangling vertex {0}")]
    DanglingVertex(VertexId),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("ranking shorter than B ({len} users, {buckets} buckets)")]
    RankingTooShort { len: usize, buckets: usize },

    #[error("undefined AUC: input needs at least one positive and one negative label")]
    UndefinedAuc,

    #[error("no users received the push")]
    NoReceivedUsers,

    #[error("invalid feedback log: {0}")]
    InvalidFeedback(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
