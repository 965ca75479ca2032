use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state has zero norm")]
    ZeroState,

    #[error("invalid Krylov size {requested} for operator of dimension {dim}")]
    InvalidKrylovSize { requested: usize, dim: usize },

    #[error("Lanczos basis is an invariant subspace (breakdown at size {size}); extension is meaningless and the Krylov error is exactly zero")]
    Breakdown { size: usize },

    #[error("dense oracle refused: dimension {dim} exceeds cap {cap} (the oracle is for verification only)")]
    OracleCap { dim: usize, cap: usize },

    #[error("Ising chain with {n_spins} spins is outside the supported range 2..={cap}")]
    IsingSize { n_spins: usize, cap: usize },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("estimator needs a basis of size at least {required}, got {actual}")]
    BasisTooSmall { required: usize, actual: usize },

    #[error("error budget {budget:e} is unreachable: estimate at the minimum step {dt_min:e} is already {estimate:e}; increase the Krylov size or the budget")]
    BudgetUnreachable { budget: f64, dt_min: f64, estimate: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
