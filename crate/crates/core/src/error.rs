use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |X - X^dagger| = {deviation:e} at entry ({row}, {col}))")]
    NotHermitian { deviation: f64, row: usize, col: usize },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace deviation {deviation:e} from unit trace")]
    TraceDeviation { deviation: f64 },

    #[error("POVM elements do not sum to identity (deviation {deviation:e})")]
    Incomplete { deviation: f64 },

    #[error("derivative has no overlap with the support of the state; quantum Fisher information diverges")]
    RankDeficient,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("numerical consistency failure: {0}")]
    NumericalConsistency(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),
}

impl Error {
    /// True for errors that indicate inconsistent numerics rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalConsistency(_) | Error::NonConvergence(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
