use thiserror::Error;

/// All errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Pattern or permutation text failed to parse; `pos` is a byte offset
    /// into the input.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// The letters do not form a permutation of {{1..n}}.
    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    /// A shading box lies outside the (k+1)×(k+1) grid.
    #[error("box {x}/{y} out of range for pattern length {k} (coordinates must be <= {k})")]
    BoxOutOfRange { x: u8, y: u8, k: usize },

    /// The same box was given twice.
    #[error("duplicate box {x}/{y}")]
    DuplicateBox { x: u8, y: u8 },

    /// A size argument fell outside an operation's guard range.
    #[error("{what}: n = {n} outside supported range {min}..={max}")]
    NOutOfRange {
        what: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },

    /// The operation needs a nonempty pattern.
    #[error("{0} is undefined for the length-0 pattern")]
    EmptyPattern(&'static str),

    /// Formula evaluated below its stated floor.
    #[error("formula {id} is defined for n >= {floor}, got n = {n}")]
    BelowFloor { id: String, floor: usize, n: usize },

    /// Unknown formula identifier.
    #[error("unknown formula id: {0}")]
    UnknownFormula(String),

    /// Series arithmetic precondition violated.
    #[error("series error: {0}")]
    Series(String),

    /// Classification pipeline misuse.
    #[error("classify error: {0}")]
    Classify(String),

    /// A malformed line in an OEIS stripped file (strict mode).
    #[error("malformed stripped line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },

    /// Remote lookup disabled or failed.
    #[error("online lookup: {0}")]
    Online(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
