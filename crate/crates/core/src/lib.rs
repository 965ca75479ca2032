//! Krylov-subspace evolution `e^{-iHt}|ψ⟩` with Loschmidt-echo error estimates.
//!
//! The Lanczos recurrence maps `(H, |ψ⟩)` onto a tight-binding chain whose
//! first site is `|ψ⟩`. Truncating the chain at `N` sites gives the Krylov
//! approximation; its infidelity is the echo between the truncated and the full
//! chain, which [`estimators`] approximates with one extra (real or averaged)
//! site or with the closed-form homogeneous chain in [`toeplitz`].

pub mod error;
pub mod estimators;
pub mod lanczos;
pub mod models;
pub mod operator;
pub mod oracle;
pub mod propagator;
pub mod state;
pub mod stepper;
pub mod toeplitz;
pub mod tridiagonal;

pub use error::{Error, Result};
pub use estimators::{
    averaged_coefficients, echo_general, estimate_extra_site_averaged, estimate_extra_site_exact,
    estimate_park_light, estimate_toeplitz_analytic, AveragedBand, AveragedCoefficients, AveragingMode,
    ChainEcho, ErrorEstimate, ErrorEstimator, EstimatorKind,
};
pub use lanczos::{lanczos_iterate, KrylovBasis, Reorthogonalization};
pub use models::{
    goe_sample, gue_sample, ising_operator, random_state, ChainOperator, IsingOperator, IsingParams,
};
pub use num_complex::Complex64;
pub use operator::{DenseOperator, LinearOperator};
pub use oracle::{exact_evolve_dense, DenseEvolver, DEFAULT_ORACLE_CAP};
pub use propagator::{
    krylov_evolve, project_profile, reduced_coefficients, true_infidelity, KrylovPropagator,
    WavepacketProfile,
};
pub use state::{inner, ComplexState};
pub use stepper::{
    evolve_adaptive, max_step_for_basis, max_step_for_tolerance, EvolutionReport, StepRecord, StepperConfig,
};
pub use toeplitz::{rescaling_check, toeplitz_echo, ToeplitzChain, ToeplitzEcho};
pub use tridiagonal::{
    eig_sym_tridiagonal, expi_tridiagonal_apply, SymmetricTridiagonal, TridiagonalEigen,
    TridiagonalPropagator,
};
