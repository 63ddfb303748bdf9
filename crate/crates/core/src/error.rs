use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix entry or vector index is outside the declared dimensions.
    #[error("index out of range: ({row}, {col}) for a {n_rows}x{n_cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    /// Operand shapes do not line up.
    #[error("dimension mismatch in {op}: expected {expected}, got {got}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    /// A scalar or structural parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A point violates its coordinate constraint set.
    #[error("infeasible point: coordinate {coord} = {value} violates its constraint")]
    InfeasiblePoint { coord: usize, value: f64 },

    /// An operation that requires a standard-form LP (r = 0, x >= 0) was
    /// called on a more general instance.
    #[error("not a standard-form LP: {0}")]
    NotStandardLp(String),

    /// The f-divergence descriptor does not carry the hooks needed to build
    /// or solve its reformulation.
    #[error("unsupported divergence: {0}")]
    UnsupportedDivergence(String),

    /// Text-format parse failure with a 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
