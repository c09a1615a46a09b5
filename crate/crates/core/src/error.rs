use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("R is not symmetric (max |R - R^T| = {residual:e})")]
    AsymmetricR { residual: f64 },

    #[error("matrix is not Hermitian (max |X - X^dagger| = {residual:e}); only the Hermitian subclass is supported")]
    NonHermitian { residual: f64 },

    #[error("invalid mode subset: {0}")]
    InvalidSubset(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("Gaussian integral does not converge (smallest eigenvalue of the integrated form {min_eigenvalue:e} is not positive)")]
    NonConvergent { min_eigenvalue: f64 },

    #[error("singular block: condition number {condition:e} exceeds {threshold:e}")]
    SingularBlock { condition: f64, threshold: f64 },

    #[error("operator is not positive (smallest B eigenvalue {min_eigenvalue} < -1)")]
    NotPositiveInput { min_eigenvalue: f64 },

    #[error("Fock matrix needs {required} entries, budget is {budget}")]
    MemoryBudget { required: usize, budget: usize },

    #[error("insufficient cutoff: {0}")]
    InsufficientCutoff(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
