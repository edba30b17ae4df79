use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("empty matrix ({rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not anti-Hermitian (residual {residual:.3e})")]
    NotAntiHermitian { residual: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid party dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    #[error("generator set failed validation: {0}")]
    GeneratorInvalid(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("singular value decomposition did not converge")]
    SvdFailed,

    #[error("unknown report format `{0}`")]
    UnknownFormat(String),

    #[error("unknown state kind `{0}`")]
    UnknownStateKind(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
