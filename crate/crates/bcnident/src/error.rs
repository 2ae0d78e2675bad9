//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the library.
///
/// Variants carry enough structure for callers to react programmatically
/// (e.g. the offending state pair of a failed observability test, or the
/// uncovered input-state pairs of an incomplete cover walk).
#[derive(Debug, Error)]
pub enum Error {
    /// A product would exceed the configured dimension cap.
    #[error("dimension cap exceeded: result would be {rows}x{cols} (cap {cap})")]
    DimensionCap {
        rows: usize,
        cols: usize,
        cap: usize,
    },

    /// Two operands (or an operand and a declared size) disagree.
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    /// A 1-based index fell outside its valid range.
    #[error("index {index} out of range 1..={bound} in {context}")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        bound: usize,
    },

    /// Integer overflow in exact matrix arithmetic.
    #[error("integer overflow in dense matrix arithmetic")]
    Overflow,

    /// Lexical or grammatical error in a network description.
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },

    /// An equation referenced a variable outside the declared ranges.
    #[error("{line}:{col}: undeclared variable `{name}`")]
    UndeclaredVariable {
        line: usize,
        col: usize,
        name: String,
    },

    /// Two equations were given for the same variable.
    #[error("{line}:{col}: duplicate equation for `{name}`")]
    DuplicateEquation {
        line: usize,
        col: usize,
        name: String,
    },

    /// A declared variable never received an equation.
    #[error("missing equation for `{name}`")]
    MissingEquation { name: String },

    /// A state relabeling map was not a permutation.
    #[error("not a permutation: {reason}")]
    InvalidPermutation { reason: String },

    /// No input sequence up to the length bound separates the pair.
    #[error("states {i} and {i2} admit no separating input sequence of length <= {max_len}")]
    NotDistinguishable { i: usize, i2: usize, max_len: usize },

    /// An ordered state pair was malformed (needs 1 <= i < i2 <= size).
    #[error("invalid state pair ({i}, {i2}) for {size} states")]
    InvalidPair { i: usize, i2: usize, size: usize },

    /// The greedy cover walk could not visit every required pair.
    ///
    /// `inputs` is the partial walk built so far; `uncovered` lists the
    /// (input, state) pairs that remain, which signals that only part of the
    /// network is identifiable from the given start state.
    #[error("cover walk left {} (input, state) pair(s) uncovered", uncovered.len())]
    Uncovered {
        inputs: Vec<usize>,
        uncovered: Vec<(usize, usize)>,
    },

    /// Measured data contradicts itself under the decoding rules.
    #[error("inconsistent data: {context}")]
    DataInconsistency { context: String },

    /// An identification result still has unknown columns where a complete
    /// network was required.
    #[error(
        "identification incomplete: {unknown_f} transition and {unknown_h} output columns unknown"
    )]
    Incomplete { unknown_f: usize, unknown_h: usize },

    /// A state count that must be a power of two (to name node counts)
    /// is not.
    #[error("state count {size} is not a power of two")]
    NotPowerOfTwo { size: usize },

    /// A data set had no usable members.
    #[error("empty data set: {context}")]
    EmptyData { context: String },

    /// A decoding window does not fit the data it is applied to.
    #[error("window {window} does not fit data of length {len}")]
    BadWindow { window: usize, len: usize },

    /// A test set does not match the data set it is applied to.
    #[error("test/data mismatch: {context}")]
    TestMismatch { context: String },

    /// An experiment id was registered twice on the same plant.
    #[error("experiment `{id}` already registered")]
    DuplicateExperiment { id: String },

    /// A query referenced an experiment id that was never registered.
    #[error("unknown experiment `{id}`")]
    UnknownExperiment { id: String },

    /// JSON (de)serialization failure.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
