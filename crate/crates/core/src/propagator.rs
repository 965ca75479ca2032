//! Krylov-approximate evolution and projections onto the Lanczos chain.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lanczos::KrylovBasis;
use crate::state::{axpy, dot, orthogonal_infidelity, ComplexState};
use crate::tridiagonal::TridiagonalPropagator;

/// Populations `|⟨v_i|state⟩|²` over the stored Lanczos vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketProfile {
    pub time: f64,
    pub site_populations: Vec<f64>,
}

impl WavepacketProfile {
    pub fn total(&self) -> f64 {
        self.site_populations.iter().sum()
    }

    /// Population-weighted mean site index.
    pub fn center_of_mass(&self) -> f64 {
        let total = self.total();
        if total == 0.0 {
            return 0.0;
        }
        self.site_populations.iter().enumerate().map(|(i, p)| i as f64 * p).sum::<f64>() / total
    }
}

/// Evolves many times over one basis without repeating the tridiagonal
/// eigendecomposition.
#[derive(Debug, Clone)]
pub struct KrylovPropagator<'a> {
    basis: &'a KrylovBasis,
    sites: usize,
    chain: TridiagonalPropagator,
}

impl<'a> KrylovPropagator<'a> {
    pub fn new(basis: &'a KrylovBasis) -> Self {
        Self::with_sites(basis, basis.len()).expect("full basis is always valid")
    }

    /// Uses only the first `sites` Lanczos vectors.
    pub fn with_sites(basis: &'a KrylovBasis, sites: usize) -> Result<Self> {
        let t = basis.leading_tridiagonal(sites)?;
        Ok(Self { basis, sites, chain: TridiagonalPropagator::new(&t) })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Coefficients of `e^{-iTt} e_1` in the Lanczos site basis.
    pub fn reduced_coefficients(&self, time: f64) -> Vec<Complex64> {
        self.chain.evolve_first(time)
    }

    /// `V† e^{-iTt} e_1 ‖ψ‖`
    pub fn evolve(&self, time: f64) -> ComplexState {
        let coeffs = self.reduced_coefficients(time);
        let mut out = vec![Complex64::new(0.0, 0.0); self.basis.source_dim()];
        let scale = self.basis.input_norm();
        for (c, v) in coeffs.iter().zip(self.basis.vectors()) {
            axpy(c * scale, v, &mut out);
        }
        ComplexState::new(out).expect("source dimension is at least one")
    }
}

pub fn krylov_evolve(basis: &KrylovBasis, time: f64) -> ComplexState {
    KrylovPropagator::new(basis).evolve(time)
}

pub fn reduced_coefficients(basis: &KrylovBasis, time: f64) -> Vec<Complex64> {
    KrylovPropagator::new(basis).reduced_coefficients(time)
}

/// Populations of `state` on each stored Lanczos vector. The profile time is
/// left for the caller to stamp.
pub fn project_profile(basis: &KrylovBasis, state: &ComplexState, time: f64) -> Result<WavepacketProfile> {
    if state.dim() != basis.source_dim() {
        return Err(Error::DimensionMismatch { expected: basis.source_dim(), actual: state.dim() });
    }
    let site_populations = basis.vectors().map(|v| dot(v, state.amplitudes()).norm_sqr()).collect();
    Ok(WavepacketProfile { time, site_populations })
}

/// `1 − |⟨approx|exact⟩|²` for normalized states, clamped to `[0, 1]`.
///
/// Evaluated as the squared norm of the part of `exact` orthogonal to
/// `approx`, so the round-off floor sits near `1e-30` rather than `1e-16`.
pub fn true_infidelity(approx: &ComplexState, exact: &ComplexState) -> Result<f64> {
    if approx.dim() != exact.dim() {
        return Err(Error::DimensionMismatch { expected: approx.dim(), actual: exact.dim() });
    }
    Ok(orthogonal_infidelity(approx.amplitudes(), exact.amplitudes()))
}
