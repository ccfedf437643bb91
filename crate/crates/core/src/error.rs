use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("duplicate name {name:?} in {list}")]
    DuplicateName { list: &'static str, name: String },

    #[error("{solver} refuses instance of size {size} (cap {cap})")]
    SizeCap {
        solver: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("enumeration exceeds cap of {cap} permutations")]
    EnumerationCap { cap: usize },

    #[error("PQ-tree degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("row {0} has no 1-entry and cannot be forced into a single segment")]
    EmptyRow(usize),

    #[error("constraint infeasible or solver non-optimal: {0}")]
    Infeasible(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid PQ-tree: {0}")]
    InvalidTree(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("drawing of {width}x{height} px exceeds the canvas limit")]
    DimensionOverflow { width: u64, height: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
