use thiserror::Error;

/// Crate-wide error type.
///
/// The variants map onto the error categories the CLI reports
/// (`parse`, `validation`, `divergence`, `unsupported-step`), plus the
/// precondition failures of individual operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("2-form is not closed: d\u{3c3} residual {residual} at basis triple {triple:?}")]
    NotCocycle { residual: String, triple: (usize, usize, usize) },

    #[error("scenario has no lattice")]
    MissingLattice,

    #[error("rationality constant mismatch: expected k = {expected}, got {got}")]
    KMismatch { expected: u64, got: u64 },

    #[error("nilpotency step {step} exceeds the supported bound {max}")]
    UnsupportedStep { step: usize, max: usize },

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    #[error("pole: {0}")]
    Pole(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("trajectory diverged (non-finite state) at t = {t}")]
    Divergence { t: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Machine-readable error category, used for CLI exit codes and error JSON.
impl Error {
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Divergence { .. } => "divergence",
            Error::UnsupportedStep { .. } | Error::NotNilpotent => "unsupported-step",
            _ => "validation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
