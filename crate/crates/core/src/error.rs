use alloc::string::String;

/// Errors raised by the symbolic and numeric layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("substitution lands on singular locus: {0}")]
    Singular(String),
    #[error("expansion depth exceeded: pole of order {order} at {hyperplane} (max {max})")]
    DepthExceeded { order: i32, max: i32, hyperplane: String },
    #[error("zero iterated residue")]
    ZeroResidue,
    #[error("pole hit at {0}")]
    Pole(String),
    #[error("numeric non-convergence: {0}")]
    NoConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not FE-centered: {0}")]
    NotCentered(String),
    #[error("indeterminate contour: {0}")]
    Indeterminate(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
