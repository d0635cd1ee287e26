use thiserror::Error;

/// Errors raised by the structure-level operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a structure of size {size}")]
    VertexOutOfRange { vertex: usize, size: usize },
    #[error("structure of size {size} exceeds the cap of {cap} for {what}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("vertex {0} is named twice in a term")]
    DuplicateVertex(usize),
    #[error("add operation with equal labels {0} and {0}")]
    EqualAddLabels(u32),
    #[error("label {0} is not a valid label")]
    InvalidLabel(u32),
    #[error("2-graph has an edge between the 1-vertices {0} and {1}")]
    OneOneEdge(usize, usize),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
