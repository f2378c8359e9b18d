use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },

    #[error("{rows}x{cols} matrix needs {expected} entries, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },

    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{what} must be square, got {rows}x{cols}")]
    NotSquare {
        what: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("complex adjoint violates the [[P, Q], [-conj Q, conj P]] block structure by {deviation:e}")]
    AdjointStructure { deviation: f64 },

    #[error("right-hand side is not {eta}-Hermitian (residual {residual:e})")]
    NotEtaHermitian { eta: crate::EtaAxis, residual: f64 },

    #[error(
        "projector conditions ({projector}) and rank conditions ({rank}) disagree; \
         tolerances are inconsistent for this input"
    )]
    ConditionFamilyDisagreement { projector: bool, rank: bool },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
