use thiserror::Error;

/// Errors raised by the numerical kernel, the state constructors and the
/// text-format reader.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian: defect {defect:e} exceeds tolerance {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("alpha = {0} is outside [2, 5]")]
    AlphaOutOfRange(f64),

    #[error("p = {0} is outside [0, 1]")]
    POutOfRange(f64),

    #[error("operator is not unitary: defect {defect:e}")]
    NotUnitary { defect: f64 },

    /// A density-matrix invariant failed. `invariant` is one of
    /// `"hermiticity"`, `"trace"` or `"positivity"`.
    #[error("invalid density matrix: {invariant} check failed (value {})", short(*value))]
    InvalidState { invariant: &'static str, value: f64 },

    #[error("decay rates sum to zero")]
    DegenerateRates,

    #[error("invalid rates: {0}")]
    InvalidRates(String),

    #[error("integration lost accuracy: {0}")]
    AccuracyLoss(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// `value` to 12 significant digits without trailing zeros.
fn short(value: f64) -> String {
    let s = format!("{value:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let rounded: f64 = format!("{mantissa}e{exp}").parse().expect("round trip");
    rounded.to_string()
}
