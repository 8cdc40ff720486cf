use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates one of the model's standing hypotheses
    /// (`n >= 3`, `sigma >= 1`, `alpha > 1`, `beta > 1`) or a domain bound.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// The exponent ledger hit a vanishing denominator.
    #[error("degenerate exponent ledger: {quantity} has a vanishing denominator ({denominator:e})")]
    DegenerateLedger {
        quantity: &'static str,
        denominator: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("field shape mismatch: expected {expected} samples, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    /// A non-finite value appeared while evaluating a named term.
    #[error("non-finite value in {term}")]
    NonFinite { term: &'static str },

    /// The step controller shrank dt below `dt_min`.
    #[error("time step underflow at t = {t}: dt = {dt:e} < dt_min = {dt_min:e}")]
    DtUnderflow { t: f64, dt: f64, dt_min: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    /// Every schema or invariant violation found in a configuration
    /// document, each prefixed with its field path.
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    ConfigViolations(Vec<String>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Interpolation indices outside the admissible range.
    #[error("invalid interpolation indices: {0}")]
    InvalidIndices(String),

    #[error("resolution failure: {0}")]
    Resolution(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code: 1 for invalid input, 2 for I/O, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Format(_) => 2,
            Error::NonFinite { .. }
            | Error::DtUnderflow { .. }
            | Error::DegenerateLedger { .. }
            | Error::ShapeMismatch { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
