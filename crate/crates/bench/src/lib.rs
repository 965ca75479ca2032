//! Shared fixtures for the benchmarks.

use krylov_echo::{
    ising_operator, lanczos_iterate, random_state, IsingOperator, IsingParams, KrylovBasis,
    Reorthogonalization,
};

pub fn ising(n_spins: usize) -> IsingOperator {
    ising_operator(IsingParams::with_default_fields(n_spins)).expect("benchmark sizes are within the cap")
}

/// Lanczos basis of the default Ising chain from a seeded random state.
pub fn ising_basis(n_spins: usize, krylov_size: usize) -> (IsingOperator, KrylovBasis) {
    let h = ising(n_spins);
    let psi = random_state(1 << n_spins, 1).expect("valid dimension");
    let basis = lanczos_iterate(&h, &psi, krylov_size, Reorthogonalization::Full).expect("valid size");
    (h, basis)
}
