use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Mismatch { expected: String, actual: String },

    #[error("entry {value} at ({row}, {col}) is outside [{lo}, {hi}]")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid answer value {value} at index {index}; expected -1 or +1")]
    InvalidAnswer { index: usize, value: i8 },

    #[error("invalid response value {value} at ({row}, {col}); expected -1, 0 or +1")]
    InvalidResponse { row: usize, col: usize, value: i8 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("power iteration did not converge after {iterations} iterations (last change {last_change:e})")]
    EigenNotConverged {
        iterations: usize,
        last_change: f64,
        /// Last iterate, normalized and sign-resolved.
        last_vector: Vec<f64>,
    },

    #[error("bimonotone projection did not converge after {sweeps} sweeps (last change {last_change:e})")]
    ProjectionNotConverged { sweeps: usize, last_change: f64 },

    #[error("problem size {n}x{d} exceeds the enumeration cap {max_n}x{max_d}")]
    SizeCapExceeded {
        n: usize,
        d: usize,
        max_n: usize,
        max_d: usize,
    },

    #[error("unsatisfiable scenario: {0}")]
    Scenario(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
