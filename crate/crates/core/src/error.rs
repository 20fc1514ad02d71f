//! Error type shared across the library.

use thiserror::Error;

/// Errors surfaced by lattice, pattern, action, and dictionary operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A column index `j` was used at a level whose window does not contain it.
    #[error("index {index} lies outside the level-{level} window")]
    IndexOutsideWindow { index: i64, level: String },

    /// Two objects realized at different finite levels were combined.
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: String, right: String },

    /// A pattern was asked to materialize below its native level.
    #[error("requested level {requested} is below the native level {native}")]
    LevelBelowNative { requested: u32, native: u32 },

    /// A level parameter is too small for the shape (r < r_0).
    #[error("level {level} is below the minimum admissible level {minimum} for this shape")]
    LevelTooSmall { level: u32, minimum: u32 },

    /// Two objects built over different shapes were combined.
    #[error("shape mismatch")]
    ShapeMismatch,

    /// A row's exception count does not match the shape datum.
    #[error("row {row} carries {found} markers, expected {expected}")]
    MarkerCount {
        row: usize,
        found: usize,
        expected: usize,
    },

    /// An explicit row listing has the wrong length for the requested window.
    #[error("row {row} has length {found}, expected {expected}")]
    RowLength {
        row: usize,
        found: usize,
        expected: usize,
    },

    /// An explicit pattern has the wrong number of rows for its shape.
    #[error("pattern has {found} rows, expected {expected}")]
    RowCount { found: usize, expected: usize },

    /// An integral weight vector has the wrong number of coordinates.
    #[error("weight has {found} coordinates, expected {expected}")]
    WeightLength { found: usize, expected: usize },

    /// A weight difference does not lie in the non-negative span asked for.
    #[error("weight difference is not in the root lattice at this level")]
    NotInRootLattice,

    /// A weight fails the dominance conditions required by a dictionary map.
    #[error("weight is not dominant: {0}")]
    NotDominant(String),

    /// A half-integer quantity that must be integral is not.
    #[error("non-integral value where an integer was required")]
    NonIntegral,

    /// A Laurent-polynomial division left a remainder.
    #[error("inexact division of Laurent polynomials")]
    InexactDivision,

    /// A search that must succeed by construction failed to find its target.
    #[error("search exhausted without reaching the target")]
    SearchExhausted,

    /// A pattern position argument is out of the valid range.
    #[error("position out of range: {0}")]
    PositionOutOfRange(String),

    /// A shape datum is malformed (zero rows, inconsistent lengths, bad bits).
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal invariant that callers rely on was violated.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
