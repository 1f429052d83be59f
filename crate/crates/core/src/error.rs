use alloc::boxed::Box;
use alloc::string::String;

use crate::codec::Stage;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("invalid {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("collection must be a set")]
    NotASet,

    #[error("collection of {count} strings exceeds hmax = {hmax}")]
    TooManyStrings { count: usize, hmax: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input not a Dyck mixture: composition of length {len} with ones = len/2")]
    NotDyckMixture { len: usize },

    #[error("malformed mixture: {0}")]
    MalformedMixture(String),

    #[error("incomplete prefix multiset: length {len} has {found} prefix compositions, expected {expected}")]
    IncompletePrefix {
        len: usize,
        found: usize,
        expected: usize,
    },

    #[error("inconsistent multiset: t_{position} = {value} outside [0, {h_bar}]")]
    InconsistentMultiset {
        position: usize,
        value: i64,
        h_bar: usize,
    },

    #[error("unsupported field degree {0} (supported: 2..=16)")]
    UnsupportedFieldDegree(u32),

    #[error("instance too large for brute force: {required} subsets exceed limit {limit}")]
    TooLarge { required: u128, limit: u128 },

    #[error("n = {0} is not a square with even root; call pad_to_square first")]
    NotEvenSquare(usize),

    #[error("v outside balancing envelope: {0}")]
    OutsideEnvelope(String),

    #[error("not a valid mixture of codebook columns")]
    NoSubset,

    #[error("codebook violates B_h over F_2: two column subsets share an XOR")]
    AmbiguousSubset,

    #[error("index {index} out of range for codebook of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("{stage}: {source}")]
    Stage { stage: Stage, source: Box<Error> },
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Innermost error, skipping any stage annotation.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self.root(), Error::TooLarge { .. })
    }

    /// Errors that can only come from a broken construction, never from bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self.root(), Error::AmbiguousSubset)
    }
}
