use alloc::string::String;

/// Errors raised by model construction and by the analytic operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("block at label {label} has dimension {found}, model expects {expected}")]
    ShapeMismatch { label: u64, expected: usize, found: usize },

    #[error("exponent p = {0} is outside the admissible range")]
    InvalidExponent(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("label {0} is not an irreducible representation of the model")]
    UnknownLabel(u64),

    #[error("label {0} carries only scalar invariants (no full modular matrix)")]
    ScalarOnly(u64),

    #[error("index {index} out of range for label {label} of dimension {dim}")]
    IndexOutOfRange { label: u64, index: usize, dim: usize },

    #[error("model has no length function")]
    MissingLength,

    #[error("model is of Kac type")]
    KacModel,

    #[error("degenerate free orthogonal data: {0}")]
    Degenerate(String),

    #[error("inadmissible block: {0}")]
    InadmissibleBlock(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = core::result::Result<T, Error>;
