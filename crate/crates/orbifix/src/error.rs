use thiserror::Error;

use crate::face::FaceCheck;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape: need p >= q >= 2, got p={p}, q={q}")]
    InvalidShape { p: u32, q: u32 },

    #[error("row {i} out of range 1..={p}")]
    RowOutOfRange { i: u32, p: u32 },

    #[error("cell ({i},{j}) lies outside the reduced index set of a {p}x{q} shape")]
    CellOutOfShape { i: u32, j: u32, p: u32, q: u32 },

    #[error("diagonal coordinate <{eta},{j}> lies outside a {p}x{q} shape")]
    DiagOutOfShape { eta: u32, j: u32, p: u32, q: u32 },

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("face is not fixing-ready: {0:?}")]
    NotFixingReady(FaceCheck),

    #[error("empty face: cell ({i},{j}) is forced to both 0 and 1")]
    EmptyFace { i: u32, j: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
