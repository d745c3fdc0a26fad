use thiserror::Error;

use crate::expr::ParseError;
use crate::ncpoly::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("fourier extraction residual {residual:e} on word {word} exceeds tolerance {tolerance:e}")]
    RoundingResidual { word: Word, residual: f64, tolerance: f64 },

    #[error("trace undefined on word {0}")]
    TraceUndefined(Word),

    #[error("invalid trace table: {0}")]
    InvalidTraceTable(String),

    #[error("term budget exceeded: {terms} > {budget}")]
    BudgetExceeded { terms: usize, budget: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("polynomial is not self-adjoint")]
    NotSelfAdjoint,

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("empty measure")]
    EmptyMeasure,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("only {found} grid points carry mass near t = {t}; raise N or trials")]
    SparseMass { t: f64, found: usize },

    #[error("unknown {kind} '{name}' (registered: {available})")]
    UnknownStrategy { kind: &'static str, name: String, available: String },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
