//! Error type shared by the homological layer.

use thiserror::Error;

/// Structural failures detected while building or combining complexes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("duplicate generator label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),

    #[error("boundary matrix at degree {degree} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    BoundaryShape {
        degree: i64,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },

    #[error("boundary squared is nonzero starting at degree {degree}")]
    BoundarySquare { degree: i64 },

    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("map component at degree {degree} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    ComponentShape {
        degree: i64,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },

    #[error("chain map identity fails at degree {degree}")]
    NotChainMap { degree: i64 },

    #[error("directions disagree: {from:?} vs {to:?}")]
    DirectionMismatch {
        from: crate::complex::Direction,
        to: crate::complex::Direction,
    },

    #[error("labels {0:?} do not span a subcomplex: boundary leaves the span")]
    NotSubcomplex(String),

    #[error("filtration level {level} for `{label}` outside 1..={levels}")]
    LevelRange {
        label: String,
        level: usize,
        levels: usize,
    },

    #[error("boundary entry `{from}` -> `{to}` drops the filtration level ({from_level} -> {to_level})")]
    FiltrationViolated {
        from: String,
        to: String,
        from_level: usize,
        to_level: usize,
    },

    #[error("sequence not exact at position {position} ({label}): im has rank {im_rank}, ker has rank {ker_rank}")]
    NotExact {
        position: usize,
        label: String,
        im_rank: usize,
        ker_rank: usize,
    },

    #[error("vector does not lie in the expected subspace: {0}")]
    OutsideSpan(String),
}
